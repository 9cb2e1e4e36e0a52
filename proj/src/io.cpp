#include "starfield/io.hpp"

#include <cctype>
#include <optional>
#include <regex>
#include <set>
#include <sstream>

#include "starfield/errors.hpp"

namespace starfield {

// ---- tokens ------------------------------------------------------------------

namespace {

enum class Tok { number, ident, symbol, end };

struct Token {
    Tok kind = Tok::end;
    std::string text;
    int column = 0;
};

std::vector<Token> tokenize(std::string_view s, SourcePos at) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const char c = s[i];
        const int col = at.column + static_cast<int>(i);
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
                ++j;
            }
            out.push_back({Tok::number, std::string(s.substr(i, j - i)), col});
            i = j;
        } else if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) {
                ++j;
            }
            out.push_back({Tok::ident, std::string(s.substr(i, j - i)), col});
            i = j;
        } else if (std::string_view("+-*/^(),").find(c) != std::string_view::npos) {
            out.push_back({Tok::symbol, std::string(1, c), col});
            ++i;
        } else {
            throw ParseError("unexpected character", at.line, col, std::string(1, c));
        }
    }
    out.push_back({Tok::end, "", at.column + static_cast<int>(s.size())});
    return out;
}

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

class Parser {
public:
    Parser(std::string_view text, int max_field, SourcePos at)
        : toks_(tokenize(text, at)), max_field_(max_field), line_(at.line) {}

    TotalDiffOp::Entry parse_all(bool allow_d) {
        TotalDiffOp::Entry e = expr(allow_d);
        if (peek().kind != Tok::end) {
            fail("unexpected token", peek());
        }
        return e;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_++]; }
    bool at_symbol(char c) const { return peek().kind == Tok::symbol && peek().text[0] == c; }

    [[noreturn]] void fail(const std::string& msg, const Token& t) const {
        throw ParseError(msg, line_, t.column, t.kind == Tok::end ? "<end>" : t.text);
    }

    void expect(char c) {
        if (!at_symbol(c)) {
            fail(std::string("expected '") + c + "'", peek());
        }
        ++pos_;
    }

    static void add(TotalDiffOp::Entry& e, const MultiIndex& tau, const DiffPoly& c) {
        DiffPoly& slot = e[tau];
        slot += c;
        if (slot.is_zero()) {
            e.erase(tau);
        }
    }

    TotalDiffOp::Entry expr(bool allow_d) {
        TotalDiffOp::Entry e;
        auto [c, tau] = term(allow_d);
        add(e, tau, c);
        while (at_symbol('+') || at_symbol('-')) {
            const bool minus = next().text[0] == '-';
            auto [c2, tau2] = term(allow_d);
            add(e, tau2, minus ? -c2 : c2);
        }
        return e;
    }

    DiffPoly plain_expr() {
        TotalDiffOp::Entry e = expr(false);
        return e.empty() ? DiffPoly{} : e.begin()->second;
    }

    std::pair<DiffPoly, MultiIndex> term(bool allow_d) {
        std::optional<MultiIndex> tau;
        DiffPoly acc = factor(allow_d, tau);
        while (at_symbol('*') || at_symbol('/')) {
            const Token& op = next();
            if (tau) {
                fail("D must be the rightmost factor", op);
            }
            if (op.text[0] == '*') {
                acc = mul(acc, factor(allow_d, tau));
            } else {
                const Token& at = peek();
                std::optional<MultiIndex> none;
                DiffPoly d = factor(false, none);
                if (!d.is_constant() || d.is_zero()) {
                    fail("division only by a nonzero constant", at);
                }
                acc *= 1 / d.constant_term();
            }
        }
        return {acc, tau.value_or(MultiIndex{})};
    }

    DiffPoly factor(bool allow_d, std::optional<MultiIndex>& tau) {
        if (at_symbol('-')) {
            ++pos_;
            return -factor(allow_d, tau);
        }
        if (at_symbol('+')) {
            ++pos_;
            return factor(allow_d, tau);
        }
        if (allow_d && peek().kind == Tok::ident && peek().text == "D") {
            ++pos_;
            tau = derivative_operator();
            return DiffPoly(1);
        }
        DiffPoly base = atom();
        if (at_symbol('^')) {
            ++pos_;
            const Token& t = next();
            if (t.kind != Tok::number) {
                fail("exponent must be a non-negative integer", t);
            }
            if (t.text.size() > 6) {
                fail("exponent too large", t);
            }
            base = power(base, static_cast<unsigned>(std::stoul(t.text)));
        }
        return base;
    }

    MultiIndex derivative_operator() {
        MultiIndex tau = MultiIndex::single(1);
        if (at_symbol('(')) {
            ++pos_;
            const Token& t = next();
            if (t.kind != Tok::ident) {
                fail("expected derivative directions", t);
            }
            tau = directions(t.text, t);
            expect(')');
        }
        if (at_symbol('^')) {
            ++pos_;
            const Token& t = next();
            if (t.kind != Tok::number || t.text.size() > 3) {
                fail("expected a small integer power of D", t);
            }
            const int k = std::stoi(t.text);
            MultiIndex r;
            for (int i = 0; i < k; ++i) {
                r = r + tau;
            }
            tau = r;
        }
        return tau;
    }

    MultiIndex directions(const std::string& s, const Token& t) const {
        MultiIndex m;
        std::size_t i = 0;
        while (i < s.size()) {
            int dir = 0;
            const char c = s[i++];
            if (c == 'x' && i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
                std::size_t j = i;
                while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
                    ++j;
                }
                dir = j - i > 2 ? 99 : std::stoi(s.substr(i, j - i));
                i = j;
            } else if (c == 'x') {
                dir = 1;
            } else if (c == 'y') {
                dir = 2;
            } else if (c == 'z') {
                dir = 3;
            } else {
                fail("bad derivative direction", t);
            }
            if (dir < 1 || dir > kMaxBaseDim) {
                fail("derivative direction out of range", t);
            }
            if (m.count(dir) >= 255) {
                fail("derivative order too large", t);
            }
            m = m.raised(dir);
        }
        if (m.empty()) {
            fail("empty derivative suffix", t);
        }
        return m;
    }

    int field_index(const std::string& digits, const Token& t) const {
        if (!all_digits(digits) || digits.size() > 4) {
            fail("bad field index", t);
        }
        const int f = std::stoi(digits);
        if (f < 1 || f > key::kMaxField || (max_field_ > 0 && f > max_field_)) {
            fail("unknown field index", t);
        }
        return f;
    }

    DiffPoly atom() {
        const Token& t = next();
        if (t.kind == Tok::number) {
            return DiffPoly(Scalar(mpz_class(t.text)));
        }
        if (t.kind == Tok::symbol && t.text == "(") {
            DiffPoly inner = plain_expr();
            expect(')');
            return inner;
        }
        if (t.kind != Tok::ident) {
            fail("unexpected token", t);
        }
        const std::string& s = t.text;
        if (s == "exp") {
            expect('(');
            const Token& start = peek();
            DiffPoly inner = plain_expr();
            expect(')');
            return exp_atom(inner, start);
        }
        if (s == "x" || s == "y" || s == "z") {
            return DiffPoly::generator(Generator::coordinate(s == "x" ? 1 : s == "y" ? 2 : 3));
        }
        if (s.size() > 1 && s[0] == 'x' && s[1] != 'i') {
            if (!all_digits(s.substr(1)) || s.size() > 3) {
                fail("unknown identifier", t);
            }
            const int dir = std::stoi(s.substr(1));
            if (dir < 1 || dir > kMaxBaseDim) {
                fail("coordinate index out of range", t);
            }
            return DiffPoly::generator(Generator::coordinate(dir));
        }
        bool odd = false;
        std::size_t head = 0;
        if (s.rfind("xi", 0) == 0) {
            odd = true;
            head = 2;
        } else if (s[0] == 'u') {
            head = 1;
        } else {
            fail("unknown identifier", t);
        }
        const std::size_t us = s.find('_');
        const int f = field_index(s.substr(head, us == std::string::npos ? std::string::npos : us - head), t);
        MultiIndex sigma;
        if (us != std::string::npos) {
            sigma = directions(s.substr(us + 1), t);
        }
        return DiffPoly::generator(odd ? Generator::odd(f, sigma) : Generator::even(f, sigma));
    }

    DiffPoly exp_atom(const DiffPoly& inner, const Token& at) const {
        std::vector<Scalar> lambda;
        for (const auto& [m, c] : inner.terms()) {
            if (!m.odd.empty() || m.has_exp() || m.even.size() != 1 || m.even[0].second != 1
                || key::kind(m.even[0].first) != GenKind::even || key::order(m.even[0].first) != 0) {
                fail("exp() needs a linear combination of undifferentiated fields", at);
            }
            const auto f = static_cast<std::size_t>(key::field(m.even[0].first));
            if (lambda.size() < f) {
                lambda.resize(f);
            }
            lambda[f - 1] += c;
        }
        if (lambda.empty()) {
            fail("exp() needs a linear combination of undifferentiated fields", at);
        }
        return DiffPoly::generator(Generator::exp_atom(std::move(lambda)));
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int max_field_;
    int line_;
};

} // namespace

DiffPoly parse_expression(std::string_view text, int max_field, SourcePos at) {
    Parser p(text, max_field, at);
    TotalDiffOp::Entry e = p.parse_all(false);
    return e.empty() ? DiffPoly{} : e.begin()->second;
}

TotalDiffOp parse_operator_expression(std::string_view text, int max_field, SourcePos at) {
    Parser p(text, max_field, at);
    TotalDiffOp::Entry e = p.parse_all(true);
    TotalDiffOp A(1, 1);
    for (const auto& [tau, c] : e) {
        try {
            A.add(0, 0, tau, c);
        } catch (const DomainError& err) {
            throw ParseError(err.what(), at.line, at.column, std::string(text));
        }
    }
    return A;
}

// ---- printing ----------------------------------------------------------------

namespace {

std::string direction_name(int a) {
    switch (a) {
    case 1:
        return "x";
    case 2:
        return "y";
    case 3:
        return "z";
    default:
        return "x" + std::to_string(a);
    }
}

std::string directions_name(const MultiIndex& m) {
    std::string s;
    for (int a : m.directions()) {
        s += direction_name(a);
    }
    return s;
}

std::string print_lambda(const std::vector<Scalar>& lambda) {
    DiffPoly lin;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        lin += DiffPoly::generator(Generator::even(static_cast<int>(i) + 1)) * lambda[i];
    }
    return "exp(" + print_expression(lin) + ")";
}

// Factors of a monomial joined by '*'; empty for the unit monomial.
std::string print_monomial(const Monomial& m) {
    std::vector<std::string> parts;
    for (const auto& [k, e] : m.even) {
        parts.push_back(print_generator(k) + (e > 1 ? "^" + std::to_string(e) : ""));
    }
    if (m.has_exp()) {
        parts.push_back(print_lambda(m.exp_lambda));
    }
    for (GenKey k : m.odd) {
        parts.push_back(print_generator(k));
    }
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        s += (i ? "*" : "") + parts[i];
    }
    return s;
}

// Appends "c*body" with the sign folded into the separator.
void append_term(std::string& out, const Scalar& c, const std::string& body) {
    const bool neg = c < 0;
    const Scalar a = neg ? Scalar(-c) : c;
    if (out.empty()) {
        out += neg ? "-" : "";
    } else {
        out += neg ? " - " : " + ";
    }
    if (body.empty()) {
        out += to_string(a);
    } else if (a == 1) {
        out += body;
    } else {
        out += to_string(a) + "*" + body;
    }
}

} // namespace

std::string print_generator(GenKey k) {
    switch (key::kind(k)) {
    case GenKind::coordinate:
        return direction_name(key::field(k));
    case GenKind::even:
    case GenKind::odd: {
        std::string s = (key::is_odd(k) ? "xi" : "u") + std::to_string(key::field(k));
        const MultiIndex sigma = key::sigma(k);
        if (!sigma.empty()) {
            s += "_" + directions_name(sigma);
        }
        return s;
    }
    default:
        return "exp(?)";
    }
}

std::string print_expression(const DiffPoly& p) {
    std::string out;
    for (const auto& [m, c] : p.terms()) {
        append_term(out, c, print_monomial(m));
    }
    return out.empty() ? "0" : out;
}

std::string print_series(const HbarSeries& s) {
    std::string out;
    for (int k = 0; k <= s.order(); ++k) {
        if (k > 0) {
            out += k == 1 ? " + h*" : " + h^" + std::to_string(k) + "*";
        }
        out += "(" + print_expression(s[k]) + ")";
    }
    return out;
}

std::string print_entry(const TotalDiffOp::Entry& e) {
    std::string out;
    for (auto it = e.rbegin(); it != e.rend(); ++it) {
        const auto& [tau, c] = *it;
        if (tau.empty()) {
            for (const auto& [m, a] : c.terms()) {
                append_term(out, a, print_monomial(m));
            }
            continue;
        }
        const std::string d = "D(" + directions_name(tau) + ")";
        if (c.size() == 1) {
            const auto& [m, a] = *c.terms().begin();
            const std::string body = print_monomial(m);
            append_term(out, a, body.empty() ? d : body + "*" + d);
        } else {
            append_term(out, 1, "(" + print_expression(c) + ")*" + d);
        }
    }
    return out.empty() ? "0" : out;
}

std::string print_operator(const TotalDiffOp& A, const std::string& name) {
    std::string out;
    for (int i = 0; i < A.rows(); ++i) {
        for (int j = 0; j < A.cols(); ++j) {
            if (!A.entry(i, j).empty()) {
                out += name + "[" + std::to_string(i + 1) + "," + std::to_string(j + 1)
                       + "] = " + print_entry(A.entry(i, j)) + "\n";
            }
        }
    }
    return out.empty() ? "0\n" : out;
}

std::string print_multilocal(const MultilocalSum& s) {
    std::string out;
    const DiffPoly connected = s.connected_density();
    if (!connected.is_zero()) {
        out = "int(" + print_expression(connected) + ")";
    }
    for (const auto& [k, c] : s.terms()) {
        if (k.second.size() < 2) {
            continue;
        }
        std::string body;
        for (std::size_t i = 0; i < k.second.size(); ++i) {
            const std::string m = print_monomial(k.second[i]);
            body += (i ? "*" : "") + std::string("int(") + (m.empty() ? "1" : m) + ")";
        }
        append_term(out, c, body);
    }
    return out.empty() ? "0" : out;
}

std::string print_graph(const KontsevichGraph& g) {
    std::string out = "sinks " + std::to_string(g.sinks) + "; internal " + std::to_string(g.internal());
    for (int v = 0; v < g.internal(); ++v) {
        const auto& e = g.edges[static_cast<std::size_t>(v)];
        out += "; e " + std::to_string(g.sinks + v) + ": (" + std::to_string(e[0]) + "," + std::to_string(e[1]) + ")";
    }
    return out;
}

// ---- files -----------------------------------------------------------------------

namespace {

struct Statement {
    std::string text;
    int line;
    int column; // 1-based column where text starts
};

std::vector<Statement> statements(std::string_view src) {
    std::vector<Statement> out;
    int line = 1;
    std::size_t pos = 0;
    while (pos <= src.size()) {
        std::size_t eol = src.find('\n', pos);
        if (eol == std::string_view::npos) {
            eol = src.size();
        }
        std::string_view raw = src.substr(pos, eol - pos);
        const std::size_t hash = raw.find('#');
        if (hash != std::string_view::npos) {
            raw = raw.substr(0, hash);
        }
        std::size_t start = 0;
        while (start <= raw.size()) {
            std::size_t semi = raw.find(';', start);
            if (semi == std::string_view::npos) {
                semi = raw.size();
            }
            std::string_view piece = raw.substr(start, semi - start);
            std::size_t lead = 0;
            while (lead < piece.size() && std::isspace(static_cast<unsigned char>(piece[lead]))) {
                ++lead;
            }
            std::size_t end = piece.size();
            while (end > lead && std::isspace(static_cast<unsigned char>(piece[end - 1]))) {
                --end;
            }
            if (end > lead) {
                out.push_back({std::string(piece.substr(lead, end - lead)), line,
                               static_cast<int>(start + lead) + 1});
            }
            start = semi + 1;
        }
        pos = eol + 1;
        ++line;
    }
    return out;
}

[[noreturn]] void fail(const std::string& msg, const Statement& s) {
    const std::size_t sp = s.text.find_first_of(" \t[:=");
    throw ParseError(msg, s.line, s.column, s.text.substr(0, sp));
}

int to_int(const std::string& digits, const Statement& s) {
    if (digits.size() > 6) {
        fail("number too large", s);
    }
    return std::stoi(digits);
}

// Reads a "name <int>" header statement.
std::optional<int> header(const Statement& s, const std::string& name) {
    static const std::regex re(R"(^([A-Za-z]+)\s+(\d+)$)");
    std::smatch m;
    if (std::regex_match(s.text, m, re) && m[1] == name) {
        return to_int(m[2], s);
    }
    return std::nullopt;
}

SourcePos rhs_pos(const Statement& s, const std::smatch& m, int group) {
    return {s.line, s.column + static_cast<int>(m.position(group))};
}

} // namespace

Bivector parse_bivector(std::string_view text) {
    const auto st = statements(text);
    if (st.empty()) {
        throw ParseError("empty bivector file", 1, 1, "<end>");
    }
    const auto dim = header(st[0], "dim");
    if (!dim || *dim < 1) {
        fail("expected 'dim <n>'", st[0]);
    }
    Bivector P(*dim);
    std::set<std::pair<int, int>> seen;
    static const std::regex re(R"(^P\s*\[\s*(\d+)\s*,\s*(\d+)\s*\]\s*=\s*(.*)$)");
    for (std::size_t k = 1; k < st.size(); ++k) {
        std::smatch m;
        if (!std::regex_match(st[k].text, m, re)) {
            fail("expected 'P[i,j] = <expr>'", st[k]);
        }
        const int i = to_int(m[1], st[k]);
        const int j = to_int(m[2], st[k]);
        if (i < 1 || j < 1 || i > *dim || j > *dim || i == j) {
            fail("component index out of range", st[k]);
        }
        if (!seen.insert(std::minmax(i, j)).second) {
            fail("component given twice", st[k]);
        }
        const DiffPoly value = parse_expression(m[3].str(), *dim, rhs_pos(st[k], m, 3));
        try {
            P.set(i, j, value);
        } catch (const Error& e) {
            fail(e.what(), st[k]);
        }
    }
    return P;
}

LeibnizGraph parse_graph(std::string_view text) {
    const auto st = statements(text);
    if (st.size() < 2) {
        throw ParseError("graph file needs 'sinks' and 'internal' lines", 1, 1, "<end>");
    }
    const auto sinks = header(st[0], "sinks");
    if (!sinks || *sinks < 1) {
        fail("expected 'sinks <s>' with s >= 1", st[0]);
    }
    const auto internal = header(st[1], "internal");
    if (!internal) {
        fail("expected 'internal <k>'", st[1]);
    }
    LeibnizGraph g{*sinks, std::vector<LeibnizVertex>(static_cast<std::size_t>(*internal))};
    std::vector<bool> given(static_cast<std::size_t>(*internal), false);
    static const std::regex re(R"(^([ej])\s+(\d+)\s*:\s*\(\s*(\d+)\s*,\s*(\d+)\s*(?:,\s*(\d+)\s*)?\)$)");
    for (std::size_t k = 2; k < st.size(); ++k) {
        std::smatch m;
        if (!std::regex_match(st[k].text, m, re)) {
            fail("expected 'e <v>: (a,b)' or 'j <v>: (a,b,c)'", st[k]);
        }
        const bool jac = m[1] == "j";
        if (jac != m[5].matched) {
            fail(jac ? "Jacobiator vertex needs three targets" : "edge vertex needs two targets", st[k]);
        }
        const int v = to_int(m[2], st[k]) - *sinks;
        if (v < 0 || v >= *internal) {
            fail("vertex is not internal", st[k]);
        }
        if (given[static_cast<std::size_t>(v)]) {
            fail("vertex given twice", st[k]);
        }
        given[static_cast<std::size_t>(v)] = true;
        auto& t = g.vertices[static_cast<std::size_t>(v)].targets;
        t = {to_int(m[3], st[k]), to_int(m[4], st[k])};
        if (jac) {
            t.push_back(to_int(m[5], st[k]));
        }
    }
    for (std::size_t v = 0; v < given.size(); ++v) {
        if (!given[v]) {
            throw ParseError("internal vertex " + std::to_string(*sinks + static_cast<int>(v)) + " has no edges",
                             st.back().line, 1, "<end>");
        }
    }
    return g;
}

KontsevichGraph to_kontsevich(const LeibnizGraph& g) {
    KontsevichGraph k{g.sinks, {}};
    for (const auto& v : g.vertices) {
        if (v.is_jacobiator()) {
            throw DomainError("graph has a Jacobiator vertex");
        }
        k.edges.push_back({v.targets[0], v.targets[1]});
    }
    if (!is_admissible(k)) {
        throw DomainError("graph is not admissible (tadpole, multiple edge or bad target)");
    }
    return k;
}

OperatorFile parse_operator_file(std::string_view text) {
    const auto st = statements(text);
    if (st.empty()) {
        throw ParseError("empty operator file", 1, 1, "<end>");
    }
    OperatorFile f;
    std::size_t k = 0;
    const auto n = header(st[k], "fields");
    if (!n || *n < 1) {
        fail("expected 'fields <n>'", st[k]);
    }
    f.fields = *n;
    ++k;
    if (k < st.size()) {
        if (auto b = header(st[k], "base")) {
            if (*b < 1 || *b > kMaxBaseDim) {
                fail("base dimension out of range", st[k]);
            }
            f.base_dim = *b;
            ++k;
        }
    }
    f.op = TotalDiffOp(f.fields, f.fields);
    std::set<std::pair<int, int>> seen;
    static const std::regex re(R"(^A\s*\[\s*(\d+)\s*,\s*(\d+)\s*\]\s*=\s*(.*)$)");
    for (; k < st.size(); ++k) {
        std::smatch m;
        if (!std::regex_match(st[k].text, m, re)) {
            fail("expected 'A[i,j] = <operator>'", st[k]);
        }
        const int i = to_int(m[1], st[k]);
        const int j = to_int(m[2], st[k]);
        if (i < 1 || j < 1 || i > f.fields || j > f.fields) {
            fail("entry index out of range", st[k]);
        }
        if (!seen.emplace(i, j).second) {
            fail("entry given twice", st[k]);
        }
        const TotalDiffOp e = parse_operator_expression(m[3].str(), f.fields, rhs_pos(st[k], m, 3));
        for (const auto& [tau, c] : e.entry(0, 0)) {
            if (tau.max_direction() > f.base_dim) {
                fail("derivative direction outside the base", st[k]);
            }
            f.op.add(i - 1, j - 1, tau, c);
        }
    }
    return f;
}

MiuraMap parse_miura_file(std::string_view text) {
    const auto st = statements(text);
    MiuraMap M;
    std::size_t k = 0;
    auto need = [&](const std::string& name) {
        if (k >= st.size()) {
            throw ParseError("expected '" + name + " <n>'", st.empty() ? 1 : st.back().line, 1, "<end>");
        }
        const auto v = header(st[k], name);
        if (!v || *v < 1) {
            fail("expected '" + name + " <n>'", st[k]);
        }
        ++k;
        return *v;
    };
    M.source_fields = need("source");
    const int target = need("target");
    if (k < st.size()) {
        if (auto b = header(st[k], "base")) {
            if (*b < 1 || *b > kMaxBaseDim) {
                fail("base dimension out of range", st[k]);
            }
            M.base_dim = *b;
            ++k;
        }
    }
    M.w.resize(static_cast<std::size_t>(target));
    std::vector<bool> given(static_cast<std::size_t>(target), false);
    static const std::regex re(R"(^w(\d+)\s*=\s*(.*)$)");
    for (; k < st.size(); ++k) {
        std::smatch m;
        if (!std::regex_match(st[k].text, m, re)) {
            fail("expected 'w<i> = <expr>'", st[k]);
        }
        const int i = to_int(m[1], st[k]);
        if (i < 1 || i > target || given[static_cast<std::size_t>(i - 1)]) {
            fail("bad or repeated target index", st[k]);
        }
        given[static_cast<std::size_t>(i - 1)] = true;
        M.w[static_cast<std::size_t>(i - 1)] = parse_expression(m[2].str(), M.source_fields, rhs_pos(st[k], m, 2));
    }
    for (std::size_t i = 0; i < given.size(); ++i) {
        if (!given[i]) {
            throw ParseError("w" + std::to_string(i + 1) + " is not defined", st.empty() ? 1 : st.back().line, 1,
                             "<end>");
        }
    }
    try {
        M.validate();
    } catch (const Error& e) {
        throw ParseError(e.what(), 1, 1, "<map>");
    }
    return M;
}

} // namespace starfield
