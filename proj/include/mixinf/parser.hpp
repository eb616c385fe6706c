#ifndef MIXINF_PARSER_HPP
#define MIXINF_PARSER_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mixinf/mixed_polynomial.hpp"

namespace mixinf {

/**
 * Expression tree produced by the parser. Subtraction is stored as a sum
 * with a negated child; a division by a constant is folded into a product
 * with the reciprocal constant at parse time.
 */
struct ExpressionNode {
    enum class Kind { Constant, Variable, ConjVariable, Sum, Product, Negation, Power, Conj };

    Kind kind = Kind::Constant;
    GaussianRational value;        ///< Constant
    std::size_t index = 0;         ///< Variable, ConjVariable (0-based)
    std::uint64_t exponent = 0;    ///< Power
    std::vector<ExpressionNode> children;
};

struct ParsedExpression {
    ExpressionNode root;
    std::size_t n_vars = 1;
};

/**
 * Parses one expression in the .mpoly grammar:
 *
 *   expr    := term (('+' | '-') term)*
 *   term    := unary (('*' | '/') unary)*
 *   unary   := ('-' | '+') unary | power
 *   power   := primary ('^' unary)?
 *   primary := number | 'i' | 'z'k | 'zbar'k | 'conj' '(' expr ')' | '(' expr ')'
 *
 * Numbers are integers or decimals, read exactly. '#' starts a comment that
 * runs to the end of the line, and a line "vars: n" may appear before the
 * expression. Exponents must evaluate to natural constants and divisors to
 * nonzero constants. The variable count is the largest of the highest index
 * used, the header and n_hint.
 *
 * Throws Error with kind SyntaxError, UnknownSymbol, NonNaturalExponent or
 * NonConstantDivisor, carrying line and column.
 */
ParsedExpression parse(const std::string& text, std::optional<std::size_t> n_hint = std::nullopt);

/// Distributes everything into canonical form in n_vars variables.
MixedPolynomial expand(const ExpressionNode& node, std::size_t n_vars);
MixedPolynomial expand(const ParsedExpression& parsed);

/// parse + expand.
MixedPolynomial parse_polynomial(const std::string& text, std::optional<std::size_t> n_hint = std::nullopt);

/// Reads and parses a .mpoly file; IoError when it cannot be read.
MixedPolynomial read_mpoly_file(const std::string& path, std::optional<std::size_t> n_hint = std::nullopt);

/// Direct tree evaluation, independent of expansion.
Complex evaluate(const ExpressionNode& node, std::span<const Complex> z);

/// "vars: n" header followed by the canonical expression.
std::string to_mpoly(const MixedPolynomial& f);

} // namespace mixinf

#endif
