#include "mixinf/parser.hpp"

#include "mixinf/error.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace mixinf {

namespace {

constexpr const char* module_name = "parser";

struct Token {
    enum class Type { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
    Type type = Type::End;
    std::string text;
    Rational number;
    int line = 1;
    int column = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    std::vector<Token> tokenize()
    {
        std::vector<Token> out;
        while (true) {
            skip_space_and_comments();
            Token tok;
            tok.line = line_;
            tok.column = column_;
            if (pos_ >= text_.size()) {
                out.push_back(tok);
                return out;
            }
            const char c = text_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                tok.type = Token::Type::Number;
                read_number(tok);
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                tok.type = Token::Type::Ident;
                while (pos_ < text_.size() &&
                       (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                    tok.text += advance();
            } else {
                switch (c) {
                case '+': tok.type = Token::Type::Plus; break;
                case '-': tok.type = Token::Type::Minus; break;
                case '*': tok.type = Token::Type::Star; break;
                case '/': tok.type = Token::Type::Slash; break;
                case '^': tok.type = Token::Type::Caret; break;
                case '(': tok.type = Token::Type::LParen; break;
                case ')': tok.type = Token::Type::RParen; break;
                default:
                    throw Error(ErrorKind::SyntaxError, module_name,
                                std::string("unexpected character '") + c + "'", line_, column_);
                }
                tok.text = std::string(1, advance());
            }
            out.push_back(std::move(tok));
        }
    }

private:
    char advance()
    {
        const char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        return c;
    }

    void skip_space_and_comments()
    {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    void read_number(Token& tok)
    {
        std::string digits, fraction;
        bool seen_point = false;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                (seen_point ? fraction : digits) += advance();
            } else if (c == '.' && !seen_point) {
                seen_point = true;
                advance();
            } else {
                break;
            }
        }
        if (digits.empty() && fraction.empty())
            throw Error(ErrorKind::SyntaxError, module_name, "malformed number", tok.line, tok.column);
        tok.text = digits + (seen_point ? "." + fraction : "");
        Integer whole(digits.empty() ? "0" : digits);
        Integer scale = 1;
        Integer frac = 0;
        if (!fraction.empty()) {
            frac = Integer(fraction);
            for (std::size_t k = 0; k < fraction.size(); ++k)
                scale *= 10;
        }
        tok.number = Rational(whole) + Rational(frac, scale);
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

ExpressionNode constant_node(GaussianRational c)
{
    ExpressionNode node;
    node.kind = ExpressionNode::Kind::Constant;
    node.value = std::move(c);
    return node;
}

std::size_t max_index(const ExpressionNode& node)
{
    std::size_t m = 0;
    if (node.kind == ExpressionNode::Kind::Variable || node.kind == ExpressionNode::Kind::ConjVariable)
        m = node.index + 1;
    for (const auto& c : node.children)
        m = std::max(m, max_index(c));
    return m;
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    ExpressionNode parse_all()
    {
        if (peek().type == Token::Type::End)
            throw Error(ErrorKind::SyntaxError, module_name, "empty expression", peek().line, peek().column);
        ExpressionNode root = parse_expr();
        if (peek().type != Token::Type::End) {
            const Token& t = peek();
            const bool implicit = t.type == Token::Type::Number || t.type == Token::Type::Ident ||
                                  t.type == Token::Type::LParen;
            throw Error(ErrorKind::SyntaxError, module_name,
                        implicit ? "implicit multiplication is not allowed before '" + t.text + "'"
                                 : "unexpected '" + t.text + "'",
                        t.line, t.column);
        }
        return root;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    Token next() { return tokens_[pos_++]; }

    void expect(Token::Type type, const char* what)
    {
        if (peek().type != type)
            throw Error(ErrorKind::SyntaxError, module_name,
                        std::string("expected ") + what + (peek().type == Token::Type::End
                                                               ? " at end of input"
                                                               : ", found '" + peek().text + "'"),
                        peek().line, peek().column);
        ++pos_;
    }

    ExpressionNode parse_expr()
    {
        ExpressionNode first = parse_term();
        if (peek().type != Token::Type::Plus && peek().type != Token::Type::Minus)
            return first;
        ExpressionNode sum;
        sum.kind = ExpressionNode::Kind::Sum;
        sum.children.push_back(std::move(first));
        while (peek().type == Token::Type::Plus || peek().type == Token::Type::Minus) {
            const bool minus = next().type == Token::Type::Minus;
            ExpressionNode rhs = parse_term();
            if (minus) {
                ExpressionNode neg;
                neg.kind = ExpressionNode::Kind::Negation;
                neg.children.push_back(std::move(rhs));
                rhs = std::move(neg);
            }
            sum.children.push_back(std::move(rhs));
        }
        return sum;
    }

    ExpressionNode parse_term()
    {
        ExpressionNode first = parse_unary();
        if (peek().type != Token::Type::Star && peek().type != Token::Type::Slash)
            return first;
        ExpressionNode product;
        product.kind = ExpressionNode::Kind::Product;
        product.children.push_back(std::move(first));
        while (peek().type == Token::Type::Star || peek().type == Token::Type::Slash) {
            const Token op = next();
            const Token& at = peek();
            const int line = at.line, column = at.column;
            ExpressionNode rhs = parse_unary();
            if (op.type == Token::Type::Slash) {
                const MixedPolynomial d = expand(rhs, std::max<std::size_t>(1, max_index(rhs)));
                if (!d.is_constant() || d.is_zero())
                    throw Error(ErrorKind::NonConstantDivisor, module_name,
                                "divisor must be a nonzero constant", line, column);
                rhs = constant_node(GaussianRational(1) / d.constant_term());
            }
            product.children.push_back(std::move(rhs));
        }
        return product;
    }

    ExpressionNode parse_unary()
    {
        if (peek().type == Token::Type::Minus) {
            next();
            ExpressionNode neg;
            neg.kind = ExpressionNode::Kind::Negation;
            neg.children.push_back(parse_unary());
            return neg;
        }
        if (peek().type == Token::Type::Plus) {
            next();
            return parse_unary();
        }
        return parse_power();
    }

    ExpressionNode parse_power()
    {
        ExpressionNode base = parse_primary();
        if (peek().type != Token::Type::Caret)
            return base;
        next();
        const int line = peek().line, column = peek().column;
        const ExpressionNode exponent_expr = parse_unary();
        const MixedPolynomial e = expand(exponent_expr, std::max<std::size_t>(1, max_index(exponent_expr)));
        const GaussianRational c = e.constant_term();
        const bool natural = e.is_constant() && c.im == 0 && c.re >= 0 &&
                             boost::multiprecision::denominator(c.re) == 1;
        if (!natural)
            throw Error(ErrorKind::NonNaturalExponent, module_name,
                        "exponent must be a natural number constant", line, column);
        const Integer value = boost::multiprecision::numerator(c.re);
        if (value > Integer(max_exponent))
            throw Error(ErrorKind::ExponentOverflow, module_name, "exponent exceeds 2^31-1", line, column);
        ExpressionNode power;
        power.kind = ExpressionNode::Kind::Power;
        power.exponent = value.convert_to<std::uint64_t>();
        power.children.push_back(std::move(base));
        return power;
    }

    ExpressionNode parse_primary()
    {
        const Token tok = next();
        switch (tok.type) {
        case Token::Type::Number:
            return constant_node(GaussianRational(tok.number));
        case Token::Type::LParen: {
            ExpressionNode inner = parse_expr();
            expect(Token::Type::RParen, "')'");
            return inner;
        }
        case Token::Type::Ident:
            return identifier(tok);
        case Token::Type::End:
            throw Error(ErrorKind::SyntaxError, module_name, "unexpected end of input", tok.line, tok.column);
        default:
            throw Error(ErrorKind::SyntaxError, module_name, "unexpected '" + tok.text + "'", tok.line,
                        tok.column);
        }
    }

    ExpressionNode identifier(const Token& tok)
    {
        const std::string& s = tok.text;
        if (s == "i")
            return constant_node(GaussianRational::i());
        if (s == "conj") {
            expect(Token::Type::LParen, "'(' after conj");
            ExpressionNode node;
            node.kind = ExpressionNode::Kind::Conj;
            node.children.push_back(parse_expr());
            expect(Token::Type::RParen, "')'");
            return node;
        }
        auto indexed = [&](const std::string& prefix, ExpressionNode::Kind kind) -> std::optional<ExpressionNode> {
            if (s.size() <= prefix.size() || s.compare(0, prefix.size(), prefix) != 0)
                return std::nullopt;
            const std::string digits = s.substr(prefix.size());
            for (char c : digits)
                if (!std::isdigit(static_cast<unsigned char>(c)))
                    return std::nullopt;
            if (digits.size() > 6 || digits[0] == '0')
                return std::nullopt;
            ExpressionNode node;
            node.kind = kind;
            node.index = std::stoul(digits) - 1;
            return node;
        };
        if (auto v = indexed("zbar", ExpressionNode::Kind::ConjVariable))
            return *v;
        if (auto v = indexed("z", ExpressionNode::Kind::Variable))
            return *v;
        throw Error(ErrorKind::UnknownSymbol, module_name, "unknown symbol '" + s + "'", tok.line, tok.column);
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

/// Blanks a leading "vars: n" line (keeping positions) and returns n.
std::optional<std::size_t> take_header(std::string& text)
{
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos)
            end = text.size();
        std::size_t first = start;
        while (first < end && std::isspace(static_cast<unsigned char>(text[first])))
            ++first;
        if (first == end || text[first] == '#') {
            start = end + 1;
            continue;
        }
        if (text.compare(first, 5, "vars:") != 0)
            return std::nullopt;
        std::size_t comment = text.find('#', first);
        const std::size_t stop = std::min(end, comment == std::string::npos ? end : comment);
        std::string value = text.substr(first + 5, stop - first - 5);
        std::istringstream in(value);
        long long n = 0;
        std::string rest;
        const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + first, '\n'));
        if (!(in >> n) || (in >> rest) || n <= 0)
            throw Error(ErrorKind::SyntaxError, module_name, "malformed 'vars:' header", line, 1);
        for (std::size_t k = first; k < stop; ++k)
            text[k] = ' ';
        return static_cast<std::size_t>(n);
    }
    return std::nullopt;
}

} // namespace

ParsedExpression parse(const std::string& text, std::optional<std::size_t> n_hint)
{
    std::string body = text;
    const auto header = take_header(body);
    Parser parser(Lexer(body).tokenize());
    ParsedExpression out;
    out.root = parser.parse_all();
    out.n_vars = std::max<std::size_t>(1, max_index(out.root));
    if (header)
        out.n_vars = std::max(out.n_vars, *header);
    if (n_hint)
        out.n_vars = std::max(out.n_vars, *n_hint);
    return out;
}

MixedPolynomial expand(const ExpressionNode& node, std::size_t n)
{
    using Kind = ExpressionNode::Kind;
    switch (node.kind) {
    case Kind::Constant:
        return MixedPolynomial::constant(node.value, n);
    case Kind::Variable:
        return MixedPolynomial::variable(node.index, n);
    case Kind::ConjVariable:
        return MixedPolynomial::conj_variable(node.index, n);
    case Kind::Sum: {
        MixedPolynomial acc(n);
        for (const auto& c : node.children)
            acc += expand(c, n);
        return acc;
    }
    case Kind::Product: {
        MixedPolynomial acc = MixedPolynomial::constant(GaussianRational(1), n);
        for (const auto& c : node.children)
            acc *= expand(c, n);
        return acc;
    }
    case Kind::Negation:
        return -expand(node.children.at(0), n);
    case Kind::Power:
        return expand(node.children.at(0), n).pow(node.exponent);
    case Kind::Conj:
        return conjugate(expand(node.children.at(0), n));
    }
    return MixedPolynomial(n);
}

MixedPolynomial expand(const ParsedExpression& parsed)
{
    return expand(parsed.root, parsed.n_vars);
}

MixedPolynomial parse_polynomial(const std::string& text, std::optional<std::size_t> n_hint)
{
    return expand(parse(text, n_hint));
}

MixedPolynomial read_mpoly_file(const std::string& path, std::optional<std::size_t> n_hint)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::IoError, module_name, "cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_polynomial(buffer.str(), n_hint);
}

Complex evaluate(const ExpressionNode& node, std::span<const Complex> z)
{
    using Kind = ExpressionNode::Kind;
    switch (node.kind) {
    case Kind::Constant:
        return node.value.to_complex();
    case Kind::Variable:
        return z[node.index];
    case Kind::ConjVariable:
        return std::conj(z[node.index]);
    case Kind::Sum: {
        Complex s(0.0, 0.0);
        for (const auto& c : node.children)
            s += evaluate(c, z);
        return s;
    }
    case Kind::Product: {
        Complex p(1.0, 0.0);
        for (const auto& c : node.children)
            p *= evaluate(c, z);
        return p;
    }
    case Kind::Negation:
        return -evaluate(node.children.at(0), z);
    case Kind::Power: {
        const Complex b = evaluate(node.children.at(0), z);
        Complex p(1.0, 0.0);
        for (std::uint64_t k = 0; k < node.exponent; ++k)
            p *= b;
        return p;
    }
    case Kind::Conj:
        return std::conj(evaluate(node.children.at(0), z));
    }
    return {};
}

std::string to_mpoly(const MixedPolynomial& f)
{
    return "vars: " + std::to_string(f.n_vars()) + "\n" + to_string(f) + "\n";
}

} // namespace mixinf
