#ifndef IPM_IO_HPP
#define IPM_IO_HPP

#include <cctype>
#include <map>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ipm/solver.hpp"

namespace ipm {

/// LP text format, line oriented ('#' comments, ';' also ends a statement):
///
///   min -1 x1 + 0 x2      (or max)
///   s.t.                  (optional marker)
///   1 x1 + 1 x2 = 1       (one row per statement; <=, =, >=)
///
/// Coefficients are optional (default 1), written as integers, fractions
/// "p/q", or decimals. Variables are named; emit_lp uses x1..xn.
namespace detail_io {

struct Token {
    enum Kind { word, number, plus, minus, le, ge, eq, end, eof } kind;
    std::string text;
    int line, column;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : s_(text) {}

    Token next() {
        skip_space();
        int ln = line_, col = column_;
        if (pos_ >= s_.size()) return {Token::eof, "", ln, col};
        char c = s_[pos_];
        if (c == '\n' || c == ';') {
            advance();
            return {Token::end, "", ln, col};
        }
        if (c == '+') { advance(); return {Token::plus, "+", ln, col}; }
        if (c == '-' ) { advance(); return {Token::minus, "-", ln, col}; }
        if (c == '<' || c == '>') {
            advance();
            if (pos_ < s_.size() && s_[pos_] == '=') advance();
            return {c == '<' ? Token::le : Token::ge, c == '<' ? "<=" : ">=", ln, col};
        }
        if (c == '=') { advance(); return {Token::eq, "=", ln, col}; }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string t;
            while (pos_ < s_.size() &&
                   (std::isdigit(static_cast<unsigned char>(s_[pos_])) ||
                    s_[pos_] == '/' || s_[pos_] == '.')) {
                t += s_[pos_];
                advance();
            }
            return {Token::number, t, ln, col};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string t;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                    s_[pos_] == '_' || s_[pos_] == '.')) {
                t += s_[pos_];
                advance();
            }
            return {Token::word, t, ln, col};
        }
        throw ParseError(std::string("unexpected character '") + c + "'", ln, col);
    }

private:
    void skip_space() {
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (c == '#') {
                while (pos_ < s_.size() && s_[pos_] != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\r') {
                advance();
            } else {
                break;
            }
        }
    }
    void advance() {
        if (s_[pos_] == '\n') { ++line_; column_ = 1; } else { ++column_; }
        ++pos_;
    }

    const std::string& s_;
    std::size_t pos_ = 0;
    int line_ = 1, column_ = 1;
};

struct Term {
    Rational coeff;
    std::string var;
};

} // namespace detail_io

inline GeneralLP<Rational> parse_lp(const std::string& text) {
    using detail_io::Token;
    detail_io::Lexer lex(text);

    // Statements are separated by newlines or ';'.
    std::vector<std::vector<Token>> statements;
    std::vector<Token> cur;
    for (;;) {
        Token t = lex.next();
        if (t.kind == Token::eof) {
            if (!cur.empty()) statements.push_back(std::move(cur));
            break;
        }
        if (t.kind == Token::end) {
            if (!cur.empty()) statements.push_back(std::move(cur));
            cur.clear();
            continue;
        }
        cur.push_back(std::move(t));
    }

    if (statements.empty()) throw ParseError("empty input", 1, 1);

    std::map<std::string, std::size_t> var_index;
    std::vector<std::string> var_names;
    auto var_id = [&](const std::string& name) {
        auto it = var_index.find(name);
        if (it != var_index.end()) return it->second;
        std::size_t id = var_names.size();
        var_index.emplace(name, id);
        var_names.push_back(name);
        return id;
    };

    auto parse_terms = [&](const std::vector<Token>& toks, std::size_t& i,
                           std::vector<detail_io::Term>& out) {
        bool first = true;
        while (i < toks.size() && toks[i].kind != Token::le && toks[i].kind != Token::ge &&
               toks[i].kind != Token::eq) {
            Rational sign(1);
            if (toks[i].kind == Token::plus) {
                ++i;
            } else if (toks[i].kind == Token::minus) {
                sign = Rational(-1);
                ++i;
            } else if (!first) {
                throw ParseError("expected '+' or '-' between terms", toks[i].line,
                                 toks[i].column);
            }
            if (i >= toks.size())
                throw ParseError("dangling sign", toks.back().line, toks.back().column);
            Rational coeff(1);
            if (toks[i].kind == Token::number) {
                try {
                    coeff = Rational::from_string(toks[i].text);
                } catch (const std::domain_error& e) {
                    throw ParseError(e.what(), toks[i].line, toks[i].column);
                }
                ++i;
            }
            if (i >= toks.size() || toks[i].kind != Token::word) {
                // A bare number is only meaningful as a constant term, which
                // the format does not have.
                int ln = i < toks.size() ? toks[i].line : toks.back().line;
                int col = i < toks.size() ? toks[i].column : toks.back().column;
                throw ParseError("expected a variable name", ln, col);
            }
            out.push_back({sign * coeff, toks[i].text});
            ++i;
            first = false;
        }
    };

    // Objective.
    GeneralLP<Rational> lp;
    {
        const auto& toks = statements.front();
        if (toks.empty() || toks[0].kind != Token::word ||
            (toks[0].text != "min" && toks[0].text != "max"))
            throw ParseError("expected 'min' or 'max'", toks.empty() ? 1 : toks[0].line,
                             toks.empty() ? 1 : toks[0].column);
        lp.sense = toks[0].text == "min" ? ObjectiveSense::minimize : ObjectiveSense::maximize;
        std::size_t i = 1;
        std::vector<detail_io::Term> terms;
        parse_terms(toks, i, terms);
        if (i != toks.size())
            throw ParseError("unexpected token in objective", toks[i].line, toks[i].column);
        for (const auto& t : terms) var_id(t.var);
        lp.objective = DenseVector<Rational>(var_names.size());
        for (const auto& t : terms) lp.objective[var_index[t.var]] += t.coeff;
    }

    struct RawRow {
        std::vector<detail_io::Term> terms;
        ConstraintSense sense;
        Rational rhs;
    };
    std::vector<RawRow> raw_rows;
    for (std::size_t s = 1; s < statements.size(); ++s) {
        const auto& toks = statements[s];
        // "s.t." / "st" / "subject to" markers, alone or prefixing a row.
        std::size_t i = 0;
        if (toks[0].kind == Token::word &&
            (toks[0].text == "s.t." || toks[0].text == "st" || toks[0].text == "s.t")) {
            i = 1;
        } else if (toks.size() >= 2 && toks[0].kind == Token::word && toks[0].text == "subject" &&
                   toks[1].kind == Token::word && toks[1].text == "to") {
            i = 2;
        }
        if (i == toks.size()) continue;

        RawRow row;
        parse_terms(toks, i, row.terms);
        if (i >= toks.size())
            throw ParseError("expected '<=', '=', or '>='", toks.back().line,
                             toks.back().column);
        switch (toks[i].kind) {
            case Token::le: row.sense = ConstraintSense::le; break;
            case Token::ge: row.sense = ConstraintSense::ge; break;
            case Token::eq: row.sense = ConstraintSense::eq; break;
            default:
                throw ParseError("expected '<=', '=', or '>='", toks[i].line, toks[i].column);
        }
        ++i;
        Rational sign(1);
        if (i < toks.size() && toks[i].kind == Token::minus) { sign = Rational(-1); ++i; }
        else if (i < toks.size() && toks[i].kind == Token::plus) { ++i; }
        if (i >= toks.size() || toks[i].kind != Token::number)
            throw ParseError("expected a right-hand-side value", toks.back().line,
                             toks.back().column);
        try {
            row.rhs = sign * Rational::from_string(toks[i].text);
        } catch (const std::domain_error& e) {
            throw ParseError(e.what(), toks[i].line, toks[i].column);
        }
        ++i;
        if (i != toks.size())
            throw ParseError("unexpected token after right-hand side", toks[i].line,
                             toks[i].column);
        for (const auto& t : row.terms) var_id(t.var);
        raw_rows.push_back(std::move(row));
    }

    const std::size_t n = var_names.size();
    if (lp.objective.size() < n) {
        DenseVector<Rational> obj(n);
        for (std::size_t j = 0; j < lp.objective.size(); ++j) obj[j] = lp.objective[j];
        lp.objective = std::move(obj);
    }
    for (auto& row : raw_rows) {
        typename GeneralLP<Rational>::Row r;
        r.coeffs = DenseVector<Rational>(n);
        for (const auto& t : row.terms) r.coeffs[var_index[t.var]] += t.coeff;
        r.sense = row.sense;
        r.rhs = row.rhs;
        lp.rows.push_back(std::move(r));
    }
    return lp;
}

/// Canonical text form with variables renamed x1..xn and every coefficient
/// written out, so parse(emit(p)) reproduces p exactly.
inline std::string emit_lp(const GeneralLP<Rational>& lp) {
    std::ostringstream os;
    auto expr = [&](const DenseVector<Rational>& v) {
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (j) os << (v[j].is_negative() ? " - " : " + ");
            else if (v[j].is_negative()) os << "-";
            os << abs(v[j]).str() << " x" << (j + 1);
        }
    };
    os << (lp.sense == ObjectiveSense::minimize ? "min" : "max") << " ";
    expr(lp.objective);
    os << "\n";
    if (!lp.rows.empty()) os << "s.t.\n";
    for (const auto& row : lp.rows) {
        expr(row.coeffs);
        switch (row.sense) {
            case ConstraintSense::le: os << " <= "; break;
            case ConstraintSense::eq: os << " = "; break;
            case ConstraintSense::ge: os << " >= "; break;
        }
        os << row.rhs.str() << "\n";
    }
    return os.str();
}

/// Minimal MPS subset: NAME, ROWS (N/L/G/E), COLUMNS, RHS, ENDATA. RANGES
/// and BOUNDS are rejected: bounded or free variables do not fit the
/// all-nonnegative model.
inline GeneralLP<Rational> parse_mps(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;

    enum Section { none, rows, columns, rhs, done } section = none;
    std::string objective_row;
    std::map<std::string, std::size_t> row_index;  // constraint rows only
    std::vector<ConstraintSense> row_sense;
    std::map<std::string, std::size_t> var_index;
    std::vector<std::string> var_names;
    // (row, col) -> coeff; objective kept separately under row "".
    std::map<std::pair<std::string, std::string>, Rational> entries;
    std::map<std::string, Rational> rhs_values;

    auto fields = [](const std::string& s) {
        std::istringstream fs(s);
        std::vector<std::string> out;
        std::string f;
        while (fs >> f) out.push_back(f);
        return out;
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '*') continue;
        bool header = !std::isspace(static_cast<unsigned char>(line[0]));
        auto f = fields(line);
        if (f.empty()) continue;
        if (header) {
            const std::string& h = f[0];
            if (h == "NAME") continue;
            if (h == "ROWS") { section = rows; continue; }
            if (h == "COLUMNS") { section = columns; continue; }
            if (h == "RHS") { section = rhs; continue; }
            if (h == "ENDATA") { section = done; break; }
            if (h == "RANGES" || h == "BOUNDS")
                throw FreeVariableUnsupported("MPS section " + h + " not supported");
            throw ParseError("unknown MPS section '" + h + "'", lineno, 1);
        }
        switch (section) {
            case rows: {
                if (f.size() != 2) throw ParseError("ROWS line needs type and name", lineno, 1);
                if (f[0] == "N") {
                    if (!objective_row.empty())
                        throw ParseError("multiple N rows", lineno, 1);
                    objective_row = f[1];
                } else if (f[0] == "L" || f[0] == "G" || f[0] == "E") {
                    row_index.emplace(f[1], row_sense.size());
                    row_sense.push_back(f[0] == "L" ? ConstraintSense::le
                                        : f[0] == "G" ? ConstraintSense::ge
                                                      : ConstraintSense::eq);
                } else {
                    throw ParseError("unknown row type '" + f[0] + "'", lineno, 1);
                }
                break;
            }
            case columns: {
                if (f.size() != 3 && f.size() != 5)
                    throw ParseError("COLUMNS line needs name plus 1 or 2 pairs", lineno, 1);
                const std::string& col = f[0];
                if (!var_index.count(col)) {
                    var_index.emplace(col, var_names.size());
                    var_names.push_back(col);
                }
                for (std::size_t k = 1; k + 1 < f.size(); k += 2) {
                    const std::string& row = f[k];
                    Rational v;
                    try {
                        v = Rational::from_string(f[k + 1]);
                    } catch (const std::domain_error& e) {
                        throw ParseError(e.what(), lineno, 1);
                    }
                    std::string key = row == objective_row ? "" : row;
                    if (!key.empty() && !row_index.count(key))
                        throw ParseError("unknown row '" + row + "'", lineno, 1);
                    entries[{key, col}] += v;
                }
                break;
            }
            case rhs: {
                if (f.size() != 3 && f.size() != 5)
                    throw ParseError("RHS line needs name plus 1 or 2 pairs", lineno, 1);
                for (std::size_t k = 1; k + 1 < f.size(); k += 2) {
                    if (!row_index.count(f[k]))
                        throw ParseError("unknown RHS row '" + f[k] + "'", lineno, 1);
                    try {
                        rhs_values[f[k]] += Rational::from_string(f[k + 1]);
                    } catch (const std::domain_error& e) {
                        throw ParseError(e.what(), lineno, 1);
                    }
                }
                break;
            }
            default:
                throw ParseError("data line outside any section", lineno, 1);
        }
    }
    if (section != done) throw ParseError("missing ENDATA", lineno, 1);

    const std::size_t n = var_names.size();
    GeneralLP<Rational> lp;
    lp.sense = ObjectiveSense::minimize;
    lp.objective = DenseVector<Rational>(n);
    for (std::size_t j = 0; j < n; ++j) {
        auto it = entries.find({"", var_names[j]});
        if (it != entries.end()) lp.objective[j] = it->second;
    }
    std::vector<std::string> ordered_rows(row_sense.size());
    for (const auto& [name, idx] : row_index) ordered_rows[idx] = name;
    for (std::size_t i = 0; i < row_sense.size(); ++i) {
        typename GeneralLP<Rational>::Row r;
        r.coeffs = DenseVector<Rational>(n);
        for (std::size_t j = 0; j < n; ++j) {
            auto it = entries.find({ordered_rows[i], var_names[j]});
            if (it != entries.end()) r.coeffs[j] = it->second;
        }
        r.sense = row_sense[i];
        auto it = rhs_values.find(ordered_rows[i]);
        r.rhs = it != rhs_values.end() ? it->second : Rational(0);
        lp.rows.push_back(std::move(r));
    }
    return lp;
}

inline GeneralLP<double> to_float(const GeneralLP<Rational>& lp) {
    GeneralLP<double> out;
    out.sense = lp.sense;
    out.objective = DenseVector<double>(lp.num_vars());
    for (std::size_t j = 0; j < lp.num_vars(); ++j)
        out.objective[j] = lp.objective[j].to_double();
    for (const auto& row : lp.rows) {
        typename GeneralLP<double>::Row r;
        r.coeffs = DenseVector<double>(row.coeffs.size());
        for (std::size_t j = 0; j < row.coeffs.size(); ++j)
            r.coeffs[j] = row.coeffs[j].to_double();
        r.sense = row.sense;
        r.rhs = row.rhs.to_double();
        out.rows.push_back(std::move(r));
    }
    return out;
}

namespace detail_io {

inline nlohmann::json to_json(const Rational& v) { return v.str(); }
inline nlohmann::json to_json(double v) { return v; }

template <class T>
nlohmann::json to_json(const DenseVector<T>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (std::size_t i = 0; i < v.size(); ++i) a.push_back(to_json(v[i]));
    return a;
}

inline DenseVector<Rational> vector_from_json(const nlohmann::json& a) {
    DenseVector<Rational> v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        v[i] = Rational::from_string(a[i].get<std::string>());
    return v;
}

} // namespace detail_io

/// One JSON object per line with keys {t, mu, sigma_sq, gap, min_xs, max_xs};
/// rationals as "p/q" strings, doubles as numbers.
template <class T>
void write_trace(std::ostream& os, const Trace<T>& trace) {
    for (const auto& row : trace.rows) {
        nlohmann::json j;
        j["t"] = row.t;
        j["mu"] = detail_io::to_json(row.mu);
        j["sigma_sq"] = detail_io::to_json(row.sigma_sq);
        j["gap"] = detail_io::to_json(row.gap);
        j["min_xs"] = detail_io::to_json(row.min_xs);
        j["max_xs"] = detail_io::to_json(row.max_xs);
        os << j.dump() << "\n";
    }
}

inline nlohmann::json certificate_to_json(const Certificate& cert) {
    using detail_io::to_json;
    nlohmann::json j;
    if (const auto* o = std::get_if<OptimalCertificate>(&cert)) {
        j["status"] = "optimal";
        j["x"] = to_json(o->x);
        j["y"] = to_json(o->y);
        j["s"] = to_json(o->s);
        j["objective"] = o->objective.str();
    } else if (const auto* u = std::get_if<UnboundedCertificate>(&cert)) {
        j["status"] = "unbounded";
        j["feasible_point"] = to_json(u->feasible_point);
        j["ray"] = to_json(u->ray);
    } else {
        const auto& inf = std::get<InfeasibleCertificate>(cert);
        j["status"] = "infeasible";
        if (inf.farkas_rows) j["farkas"] = to_json(*inf.farkas_rows);
        if (inf.aux_witness) {
            nlohmann::json w;
            w["x"] = to_json(inf.aux_witness->x);
            w["y"] = to_json(inf.aux_witness->y);
            w["s"] = to_json(inf.aux_witness->s);
            w["objective"] = inf.aux_witness->objective.str();
            j["aux_witness"] = w;
        }
    }
    return j;
}

inline Certificate certificate_from_json(const nlohmann::json& j) {
    using detail_io::vector_from_json;
    const std::string status = j.at("status").get<std::string>();
    if (status == "optimal") {
        OptimalCertificate o;
        o.x = vector_from_json(j.at("x"));
        o.y = vector_from_json(j.at("y"));
        o.s = vector_from_json(j.at("s"));
        o.objective = Rational::from_string(j.at("objective").get<std::string>());
        return o;
    }
    if (status == "unbounded") {
        UnboundedCertificate u;
        u.feasible_point = vector_from_json(j.at("feasible_point"));
        u.ray = vector_from_json(j.at("ray"));
        return u;
    }
    if (status == "infeasible") {
        InfeasibleCertificate inf;
        if (j.contains("farkas")) inf.farkas_rows = vector_from_json(j.at("farkas"));
        if (j.contains("aux_witness")) {
            const auto& w = j.at("aux_witness");
            AuxOptimalPair p;
            p.x = vector_from_json(w.at("x"));
            p.y = vector_from_json(w.at("y"));
            p.s = vector_from_json(w.at("s"));
            p.objective = Rational::from_string(w.at("objective").get<std::string>());
            inf.aux_witness = std::move(p);
        }
        if (!inf.farkas_rows && !inf.aux_witness)
            throw ParseError("infeasible certificate without a witness", 1, 1);
        return inf;
    }
    throw ParseError("unknown certificate status '" + status + "'", 1, 1);
}

} // namespace ipm

#endif
