#include "dirac/cli.hpp"
#include "dirac/groupoid.hpp"

#include <algorithm>
#include <map>
#include <regex>
#include <set>
#include <variant>

namespace dirac {

namespace {

struct Count {
    std::size_t n;
};

using Value = std::variant<PatchPtr, KForm, VField, Bivector, Frame, AlgebroidPatch, GroupoidPatch, Count>;

enum class Want { patch, form, field, bivector, frame, algebroid, groupoid, count, any };

const char* want_name(Want w) {
    switch (w) {
    case Want::patch:
        return "a patch";
    case Want::form:
        return "a form";
    case Want::field:
        return "a vector field";
    case Want::bivector:
        return "a bivector";
    case Want::frame:
        return "a frame";
    case Want::algebroid:
        return "an algebroid";
    case Want::groupoid:
        return "a groupoid";
    case Want::count:
        return "a count";
    case Want::any:
        return "a value";
    }
    return "";
}

Want kind_of(const Value& v) {
    static constexpr Want order[] = {Want::patch,  Want::form,      Want::field,    Want::bivector,
                                     Want::frame,  Want::algebroid, Want::groupoid, Want::count};
    return order[v.index()];
}

bool is_ident(const std::string& s) {
    static const std::regex id("[A-Za-z_][A-Za-z0-9_]*");
    return std::regex_match(s, id);
}

// ---------------------------------------------------------------- literals

// One term `coef * b1^b2^...` of a literal; kind is '@' for coordinate
// vectors and 'd' for differentials.
struct Basis {
    char kind;
    std::string coord;
};

struct RawTerm {
    bool negative = false;
    std::vector<std::string> factors;
    std::vector<Basis> basis;
};

struct LitTerm {
    Expr coef;
    std::vector<std::pair<char, std::size_t>> basis;
};

struct Literal {
    PatchPtr patch;
    std::vector<LitTerm> terms;
};

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos)
        return {};
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

// Splits at top-level occurrences of any character in seps; the separator
// starts the next piece.
std::vector<std::string> split_top(const std::string& s, const std::string& seps, bool keep_sep) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '(')
            ++depth;
        else if (c == ')')
            --depth;
        if (depth == 0 && seps.find(c) != std::string::npos) {
            out.push_back(cur);
            cur = keep_sep ? std::string(1, c) : std::string();
            continue;
        }
        cur += c;
    }
    out.push_back(cur);
    return out;
}

// d<coord> or @<coord>. Without a patch every d-prefixed identifier longer
// than one character is a differential.
std::optional<Basis> basis_item(const std::string& item, const PatchPtr& p) {
    if (item.size() < 2 || (item[0] != 'd' && item[0] != '@'))
        return std::nullopt;
    std::string rest = item.substr(1);
    if (!is_ident(rest))
        return std::nullopt;
    if (p) {
        if (!p->index_of(rest))
            return std::nullopt;
        if (item[0] == 'd' && p->index_of(item))
            return std::nullopt;
    }
    return Basis{item[0], rest};
}

std::optional<std::vector<Basis>> basis_chain(const std::string& factor, const PatchPtr& p) {
    if (factor.find('(') != std::string::npos)
        return std::nullopt;
    std::vector<Basis> out;
    for (const auto& item : split_top(factor, "^", false)) {
        auto b = basis_item(trim(item), p);
        if (!b)
            return std::nullopt;
        out.push_back(*b);
    }
    return out;
}

std::vector<RawTerm> split_terms(const std::string& text, const PatchPtr& p) {
    // Break at + and - that follow an operand.
    std::vector<std::string> pieces;
    std::string cur;
    int depth = 0;
    char prev = 0;
    for (char c : text) {
        if (c == '(')
            ++depth;
        else if (c == ')')
            --depth;
        if (depth == 0 && (c == '+' || c == '-') && prev && std::string("*/^(+-").find(prev) == std::string::npos) {
            pieces.push_back(cur);
            cur.clear();
        }
        cur += c;
        if (!std::isspace(static_cast<unsigned char>(c)))
            prev = c;
    }
    pieces.push_back(cur);

    std::vector<RawTerm> out;
    for (auto piece : pieces) {
        RawTerm t;
        piece = trim(piece);
        while (!piece.empty() && (piece[0] == '+' || piece[0] == '-')) {
            t.negative ^= piece[0] == '-';
            piece = trim(piece.substr(1));
        }
        for (const auto& f : split_top(piece, "*", false)) {
            std::string factor = trim(f);
            auto chain = basis_chain(factor, p);
            if (chain && t.basis.empty())
                t.basis = *chain;
            else if (chain)
                throw WrongShape("more than one basis factor in '" + piece + "'");
            else
                t.factors.push_back(factor);
        }
        out.push_back(std::move(t));
    }
    return out;
}

// "(a + b)" -> "a + b", so a spaced literal can stand alone as a check argument.
std::string unwrap(std::string s) {
    s = trim(s);
    while (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
        int depth = 0;
        std::size_t close = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            depth += s[i] == '(' ? 1 : s[i] == ')' ? -1 : 0;
            if (depth == 0) {
                close = i;
                break;
            }
        }
        if (close != s.size() - 1)
            break;
        s = trim(s.substr(1, s.size() - 2));
    }
    return s;
}

// Coordinates named anywhere in the literals, sorted.
PatchPtr infer_patch(const std::vector<std::string>& texts) {
    static const std::regex id("[A-Za-z_][A-Za-z0-9_]*'*");
    std::set<std::string> coords;
    for (const auto& text : texts)
        for (const auto& t : split_terms(unwrap(text), nullptr)) {
            for (const auto& b : t.basis)
                coords.insert(b.coord);
            for (const auto& f : t.factors)
                for (std::sregex_iterator it(f.begin(), f.end(), id), e; it != e; ++it)
                    coords.insert(it->str());
        }
    return make_patch("M", {coords.begin(), coords.end()});
}

Literal parse_literal(const std::string& raw, const PatchPtr& p) {
    Literal lit{p, {}};
    std::string text = unwrap(raw);
    for (const auto& t : split_terms(text, p)) {
        LitTerm lt{Expr(p, t.negative ? -1 : 1), {}};
        for (const auto& f : t.factors) {
            if (f.empty())
                throw NonPolynomial("empty factor in '" + text + "'");
            lt.coef *= parse_expr(f, p);
        }
        for (const auto& b : t.basis)
            lt.basis.emplace_back(b.kind, p->require(b.coord));
        lit.terms.push_back(std::move(lt));
    }
    return lit;
}

KForm literal_form(const Literal& l) {
    std::optional<std::size_t> degree;
    for (const auto& t : l.terms) {
        for (const auto& [k, i] : t.basis)
            if (k != 'd')
                throw WrongShape("vector basis in a form literal");
        if (t.coef.is_zero() && t.basis.empty())
            continue;
        if (degree && *degree != t.basis.size())
            throw WrongShape("form literal mixes degrees");
        degree = t.basis.size();
    }
    KForm w(l.patch, degree.value_or(0));
    for (const auto& t : l.terms) {
        if (t.coef.is_zero())
            continue;
        KForm term = KForm::function(t.coef);
        for (const auto& b : t.basis)
            term = wedge(term, KForm::differential(l.patch, b.second));
        w = w + term;
    }
    return w;
}

VField literal_field(const Literal& l) {
    VField x = VField::zero(l.patch);
    for (const auto& t : l.terms) {
        if (t.coef.is_zero())
            continue;
        if (t.basis.size() != 1 || t.basis[0].first != '@')
            throw WrongShape("vector field terms need exactly one @ factor");
        x = x + VField::coordinate(l.patch, t.basis[0].second).scaled(t.coef);
    }
    return x;
}

Bivector literal_bivector(const Literal& l) {
    Bivector b(l.patch);
    for (const auto& t : l.terms) {
        if (t.coef.is_zero())
            continue;
        if (t.basis.size() != 2 || t.basis[0].first != '@' || t.basis[1].first != '@')
            throw WrongShape("bivector terms need the form @x^@y");
        b = b + wedge(VField::coordinate(l.patch, t.basis[0].second), VField::coordinate(l.patch, t.basis[1].second))
                    .scaled(t.coef);
    }
    return b;
}

GSec literal_section(const Literal& l) {
    GSec s = GSec::zero(l.patch);
    for (const auto& t : l.terms) {
        if (t.coef.is_zero())
            continue;
        if (t.basis.size() != 1)
            throw WrongShape("section terms need exactly one @ or d factor");
        auto [k, i] = t.basis[0];
        s = s + (k == '@' ? GSec::vector(VField::coordinate(l.patch, i).scaled(t.coef))
                          : GSec::form(KForm::differential(l.patch, i).scaled(t.coef)));
    }
    return s;
}

// ---------------------------------------------------------------- elaboration

struct Scope {
    std::map<std::string, Value> names;
    PatchPtr current; // latest patch declaration, if any
    std::size_t line = 0;
};

class Elaborator {
public:
    Elaborator(const Scope& s, PatchPtr literal_patch) : s_(s), lit_(std::move(literal_patch)) {}

    Value eval(const Term& t, Want w) {
        Value v = t.call ? construct(t) : atom(t, w);
        if (w != Want::any && kind_of(v) != w)
            fail(t, std::string("expected ") + want_name(w) + ", got " + want_name(kind_of(v)));
        return v;
    }

    template <class T>
    T get(const Term& t, Want w) {
        return std::get<T>(eval(t, w));
    }

    [[noreturn]] void fail(const Term& t, const std::string& what) const { throw SyntaxError(what, s_.line, t.column); }

private:
    Value atom(const Term& t, Want w) {
        if (auto it = s_.names.find(t.head); it != s_.names.end())
            return it->second;
        if (w == Want::count) {
            static const std::regex num("[0-9]+");
            if (!std::regex_match(t.head, num))
                fail(t, "expected a non-negative integer");
            return Count{std::stoul(t.head)};
        }
        if (w == Want::form || w == Want::field || w == Want::bivector)
            return literal_value(t, {t}, w, lit_ ? lit_ : s_.current);
        if (is_ident(t.head))
            throw UnknownReference("line " + std::to_string(s_.line) + ": unknown name '" + t.head + "'");
        fail(t, std::string("expected ") + want_name(w));
    }

    Literal literal(const Term& at, const std::string& text, const PatchPtr& p) {
        if (at.call)
            fail(at, "expected a literal");
        try {
            return parse_literal(text, p);
        } catch (const Error& e) {
            fail(at, std::string("bad literal: ") + e.what());
        }
    }

    Value literal_value(const Term& at, const std::vector<Term>& all, Want w, PatchPtr p) {
        if (!p) {
            std::vector<std::string> texts;
            for (const auto& a : all)
                texts.push_back(a.head);
            p = infer_patch(texts);
        }
        Literal l = literal(at, at.head, p);
        try {
            if (w == Want::form)
                return literal_form(l);
            if (w == Want::field)
                return literal_field(l);
            return literal_bivector(l);
        } catch (const Error& e) {
            fail(at, std::string("bad literal: ") + e.what());
        }
    }

    void arity(const Term& t, std::size_t lo, std::size_t hi) const {
        if (t.args.size() < lo || t.args.size() > hi) {
            std::string n = lo == hi ? std::to_string(lo) : std::to_string(lo) + " to " + std::to_string(hi);
            fail(t, t.head + " takes " + n + " argument" + (hi == 1 ? "" : "s"));
        }
    }

    bool names_patch(const Term& t) const {
        if (t.call)
            return t.head == "total" || t.head == "base" || t.head == "dual";
        auto it = s_.names.find(t.head);
        return it != s_.names.end() && std::holds_alternative<PatchPtr>(it->second);
    }

    // form(P?, lit), field(P?, lit), bivector(P?, lit)
    Value typed_literal(const Term& t, Want w) {
        arity(t, 1, 2);
        PatchPtr p = t.args.size() == 2 ? get<PatchPtr>(t.args[0], Want::patch) : (lit_ ? lit_ : s_.current);
        return literal_value(t.args.back(), {t.args.back()}, w, p);
    }

    Value construct(const Term& t) {
        const std::string& h = t.head;
        const auto& a = t.args;
        if (h == "form")
            return typed_literal(t, Want::form);
        if (h == "field")
            return typed_literal(t, Want::field);
        if (h == "bivector")
            return typed_literal(t, Want::bivector);
        if (h == "frame") {
            if (a.empty())
                fail(t, "frame takes at least one argument");
            std::size_t first = names_patch(a[0]) ? 1 : 0;
            PatchPtr p = first ? get<PatchPtr>(a[0], Want::patch) : (lit_ ? lit_ : s_.current);
            std::vector<Term> secs(a.begin() + static_cast<std::ptrdiff_t>(first), a.end());
            if (!p) {
                std::vector<std::string> texts;
                for (const auto& s : secs)
                    texts.push_back(s.head);
                p = infer_patch(texts);
            }
            std::vector<GSec> out;
            for (const auto& s : secs) {
                Literal l = literal(s, s.head, p);
                try {
                    out.push_back(literal_section(l));
                } catch (const Error& e) {
                    fail(s, std::string("bad literal: ") + e.what());
                }
            }
            return Frame(p, out);
        }
        if (h == "total" || h == "base") {
            arity(t, 1, 1);
            auto g = get<GroupoidPatch>(a[0], Want::groupoid);
            return h == "total" ? g.total : g.base;
        }
        if (h == "dual") {
            arity(t, 1, 1);
            return dual_total_patch(get<AlgebroidPatch>(a[0], Want::algebroid));
        }
        if (h == "graph_two_form") {
            arity(t, 1, 1);
            return module(t, [&] { return graph_two_form(get<KForm>(a[0], Want::form)); });
        }
        if (h == "graph_bivector") {
            arity(t, 1, 1);
            return module(t, [&] { return graph_bivector(get<Bivector>(a[0], Want::bivector)); });
        }
        if (h == "foliation") {
            if (a.empty())
                fail(t, "foliation takes at least one argument");
            std::size_t first = names_patch(a[0]) ? 1 : 0;
            std::vector<VField> f;
            for (std::size_t i = first; i < a.size(); ++i)
                f.push_back(get<VField>(a[i], Want::field));
            PatchPtr p = first ? get<PatchPtr>(a[0], Want::patch) : f[0].patch();
            return module(t, [&] { return foliation_frame(p, f); });
        }
        if (h == "bfield") {
            arity(t, 2, 2);
            Frame l = get<Frame>(a[0], Want::frame);
            return module(t, [&] { return bfield_transform(l, get<KForm>(a[1], Want::form)); });
        }
        if (h == "tangent_lift") {
            arity(t, 1, 1);
            return module(t, [&] { return tangent_lift_dirac(get<Frame>(a[0], Want::frame)); });
        }
        if (h == "sum") {
            if (a.empty())
                fail(t, "sum takes at least one argument");
            Value acc = eval(a[0], Want::any);
            Want w = kind_of(acc);
            for (std::size_t i = 1; i < a.size(); ++i) {
                Value next = eval(a[i], w);
                acc = module(t, [&]() -> Value {
                    if (w == Want::form)
                        return std::get<KForm>(acc) + std::get<KForm>(next);
                    if (w == Want::field)
                        return std::get<VField>(acc) + std::get<VField>(next);
                    if (w == Want::bivector)
                        return std::get<Bivector>(acc) + std::get<Bivector>(next);
                    fail(a[i], std::string("cannot add ") + want_name(w));
                });
            }
            return acc;
        }
        if (h == "tangent_algebroid") {
            arity(t, 1, 1);
            return tangent_algebroid(get<PatchPtr>(a[0], Want::patch));
        }
        if (h == "lie_algebra")
            return algebra(t);
        if (h == "lie_algebroid_of") {
            arity(t, 1, 1);
            return module(t, [&] { return lie_algebroid_of(get<GroupoidPatch>(a[0], Want::groupoid)); });
        }
        if (h == "dual_poisson") {
            arity(t, 1, 1);
            return dual_linear_poisson(get<AlgebroidPatch>(a[0], Want::algebroid));
        }
        if (h == "induced_dual_bracket") {
            arity(t, 2, 2);
            auto g = get<GroupoidPatch>(a[0], Want::groupoid);
            Elaborator inner(s_, g.total);
            Bivector p = inner.get<Bivector>(a[1], Want::bivector);
            return module(t, [&] { return induced_dual_bracket(g, p); });
        }
        if (h == "pair_groupoid") {
            arity(t, 1, 1);
            return pair_groupoid(get<PatchPtr>(a[0], Want::patch));
        }
        if (h == "abelian_group") {
            arity(t, 1, 1);
            return abelian_group(get<Count>(a[0], Want::count).n);
        }
        if (h == "heisenberg3") {
            arity(t, 0, 0);
            return heisenberg3();
        }
        if (h == "tangent_groupoid") {
            arity(t, 1, 1);
            return tangent_groupoid(get<GroupoidPatch>(a[0], Want::groupoid));
        }
        fail(t, "unknown constructor '" + h + "'");
    }

    // lie_algebra(r, [a,b] = lin, ...) with lin linear in e1..er.
    Value algebra(const Term& t) {
        if (t.args.empty())
            fail(t, "lie_algebra takes a rank and bracket relations");
        std::size_t r = get<Count>(t.args[0], Want::count).n;
        std::vector<std::string> names;
        for (std::size_t k = 1; k <= r; ++k)
            names.push_back("e" + std::to_string(k));
        PatchPtr e = make_patch("g", names);
        static const std::regex rel(R"(\[\s*([0-9]+)\s*,\s*([0-9]+)\s*\]\s*=(.*))");
        std::vector<std::tuple<std::size_t, std::size_t, std::size_t, Rational>> c;
        for (std::size_t i = 1; i < t.args.size(); ++i) {
            const Term& at = t.args[i];
            std::smatch m;
            if (at.call || !std::regex_match(at.head, m, rel))
                fail(at, "expected a relation [a,b] = combination of e1..e" + std::to_string(r));
            std::size_t x = std::stoul(m[1]), y = std::stoul(m[2]);
            if (x < 1 || x > r || y < 1 || y > r)
                fail(at, "frame index out of range");
            Expr rhs;
            try {
                rhs = parse_expr(m[3].str(), e);
            } catch (const Error& err) {
                fail(at, std::string("bad relation: ") + err.what());
            }
            if (rhs.degree() > 1)
                fail(at, "relation must be linear");
            if (!(rhs - linear_part(rhs, e)).is_zero())
                fail(at, "relation must be linear");
            for (std::size_t k = 0; k < r; ++k)
                if (Expr coef = rhs.diff(k); !coef.is_zero())
                    c.emplace_back(x - 1, y - 1, k, coef.constant_value());
        }
        return module(t, [&] { return lie_algebra(r, c); });
    }

    static Expr linear_part(const Expr& rhs, const PatchPtr& e) {
        Expr out(e, 0);
        for (std::size_t k = 0; k < e->dim(); ++k)
            out += rhs.diff(k) * Expr::var(e, k);
        return out;
    }

    // Module errors raised while building a declaration are CheckErrors.
    template <class F>
    Value module(const Term& t, F&& f) {
        try {
            return f();
        } catch (const SyntaxError&) {
            throw;
        } catch (const UnknownReference&) {
            throw;
        } catch (const Error& e) {
            throw CheckError("line " + std::to_string(s_.line) + ", column " + std::to_string(t.column) + ": " +
                             t.head + ": " + e.kind() + ": " + e.what());
        }
    }

    const Scope& s_;
    PatchPtr lit_;
};

// ---------------------------------------------------------------- checks

Report closed_report(const KForm& w) {
    KForm dw = exterior_derivative(w);
    if (dw.is_zero())
        return Report::ok("closed");
    const auto& [idx, v] = *dw.coeffs().begin();
    return Report::fail("closed", index_witness("dw", idx, v));
}

Report poisson_report(const Bivector& p) {
    std::string w = first_nonzero(schouten_jacobiator(p), p.dim(), "jacobiator");
    return w.empty() ? Report::ok("poisson") : Report::fail("poisson", w);
}

// sigma(e_a) = i_{rho(e_a)} beta.
IMTwoForm flat_along_anchor(const AlgebroidPatch& a, const KForm& beta) {
    const std::size_t n = a.n();
    ExprMatrix s(n, a.rank());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < a.rank(); ++k) {
            Expr v(a.base(), 0);
            for (std::size_t j = 0; j < n; ++j)
                v += a.anchor().at(j, k) * beta.at({j, i});
            s.at(i, k) = v;
        }
    return {s};
}

struct Signature {
    std::vector<Want> args;
    bool variadic_last = false;
};

const std::map<std::string, Signature>& signatures() {
    static const std::map<std::string, Signature> s = {
        {"dirac", {{Want::frame}}},
        {"lagrangian", {{Want::frame}}},
        {"tangent_mu", {{Want::frame}}},
        {"closed", {{Want::form}}},
        {"poisson", {{Want::bivector}}},
        {"linear", {{Want::frame, Want::count}}},
        {"lie_algebroid", {{Want::algebroid}}},
        {"lie_bialgebroid", {{Want::algebroid, Want::algebroid}}},
        {"lie_bialgebra", {{Want::algebroid, Want::algebroid, Want::count}, true}},
        {"im_two_form", {{Want::algebroid, Want::form}}},
        {"groupoid", {{Want::groupoid}}},
        {"multiplicative_form", {{Want::groupoid, Want::form}}},
        {"multiplicative_bivector", {{Want::groupoid, Want::bivector}}},
        {"multiplicative", {{Want::groupoid, Want::frame}}},
        {"induced_im_two_form", {{Want::groupoid, Want::form}}},
        {"induced_bialgebra", {{Want::groupoid, Want::bivector}}},
        {"induced_im_foliation", {{Want::groupoid, Want::field}, true}},
    };
    return s;
}

std::function<Report()> bind_check(const CheckLine& c, const Scope& scope) {
    auto sig = signatures().find(c.kind);
    if (sig == signatures().end())
        throw SyntaxError("unknown check kind '" + c.kind + "'", scope.line, 7);
    const auto& want = sig->second.args;
    std::size_t fixed = want.size() - (sig->second.variadic_last ? 1 : 0);
    if (c.args.size() < fixed || (!sig->second.variadic_last && c.args.size() > fixed)) {
        std::size_t col = c.args.empty() ? 7 : c.args.back().column;
        throw SyntaxError(c.kind + " takes " + std::to_string(fixed) + (sig->second.variadic_last ? " or more" : "") +
                              " argument" + (fixed == 1 ? "" : "s"),
                          scope.line, col);
    }

    // Literals in checks on a groupoid or algebroid live on its total space
    // or base.
    PatchPtr lit;
    std::vector<Value> v;
    for (std::size_t i = 0; i < c.args.size(); ++i) {
        Want w = want[std::min(i, want.size() - 1)];
        Elaborator e(scope, lit);
        v.push_back(e.eval(c.args[i], w));
        if (i == 0 && w == Want::groupoid)
            lit = std::get<GroupoidPatch>(v[0]).total;
        if (i == 0 && w == Want::algebroid)
            lit = std::get<AlgebroidPatch>(v[0]).base();
    }

    const std::string& k = c.kind;
    auto frame = [v](std::size_t i) { return std::get<Frame>(v[i]); };
    auto form = [v](std::size_t i) { return std::get<KForm>(v[i]); };
    auto biv = [v](std::size_t i) { return std::get<Bivector>(v[i]); };
    auto alg = [v](std::size_t i) { return std::get<AlgebroidPatch>(v[i]); };
    auto grp = [v](std::size_t i) { return std::get<GroupoidPatch>(v[i]); };
    auto count = [v](std::size_t i) { return std::get<Count>(v[i]).n; };

    if (k == "dirac")
        return [=] { return check_dirac(frame(0)); };
    if (k == "lagrangian")
        return [=] { return check_lagrangian(frame(0)); };
    if (k == "tangent_mu")
        return [=] { return check_tangent_mu_identity(frame(0)); };
    if (k == "closed")
        return [=] { return closed_report(form(0)); };
    if (k == "poisson")
        return [=] { return poisson_report(biv(0)); };
    if (k == "linear")
        return [=] { return check_linearity(frame(0), count(1)); };
    if (k == "lie_algebroid")
        return [=] { return check_lie_algebroid(alg(0)); };
    if (k == "lie_bialgebroid")
        return [=] { return check_lie_bialgebroid(alg(0), alg(1)); };
    if (k == "lie_bialgebra")
        return [=] {
            std::optional<std::vector<std::size_t>> ideal;
            if (v.size() > 2) {
                ideal.emplace();
                for (std::size_t i = 2; i < v.size(); ++i) {
                    if (count(i) == 0)
                        throw WrongShape("ideal indices are 1-based");
                    ideal->push_back(count(i) - 1);
                }
            }
            return check_lie_bialgebra({alg(0), alg(1)}, ideal);
        };
    if (k == "im_two_form")
        return [=] { return check_im_two_form(alg(0), flat_along_anchor(alg(0), form(1))); };
    if (k == "groupoid")
        return [=] { return check_groupoid_axioms(grp(0)); };
    if (k == "multiplicative_form")
        return [=] { return check_multiplicative_two_form(grp(0), form(1)); };
    if (k == "multiplicative_bivector")
        return [=] { return check_multiplicative_bivector(grp(0), biv(1)); };
    if (k == "multiplicative")
        return [=] { return check_multiplicative_frame(grp(0), frame(1)); };
    if (k == "induced_im_two_form")
        return [=] { return check_im_two_form(lie_algebroid_of(grp(0)), induced_im_two_form(grp(0), form(1))); };
    if (k == "induced_bialgebra")
        return [=] {
            return check_lie_bialgebra({lie_algebroid_of(grp(0)), induced_dual_bracket(grp(0), biv(1))});
        };
    // induced_im_foliation
    return [=] {
        std::vector<VField> f;
        for (std::size_t i = 1; i < v.size(); ++i)
            f.push_back(std::get<VField>(v[i]));
        return check_im_foliation(lie_algebroid_of(grp(0)), induced_im_foliation(grp(0), f));
    };
}

} // namespace

std::vector<Job> compile_checkfile(const CheckFile& f) {
    Scope scope;
    std::vector<Job> jobs;
    std::size_t c = 0;
    auto flush = [&](std::size_t upto) {
        for (; c < f.checks.size() && f.checks[c].scope <= upto; ++c) {
            const CheckLine& cl = f.checks[c];
            scope.line = cl.line;
            jobs.push_back({cl.name(), bind_check(cl, scope), cl.expect});
        }
    };
    for (std::size_t d = 0; d < f.decls.size(); ++d) {
        flush(d);
        const Declaration& decl = f.decls[d];
        scope.line = decl.line;
        if (scope.names.count(decl.name))
            throw SyntaxError("duplicate name '" + decl.name + "'", decl.line, 1);
        Value v;
        if (decl.kind == Declaration::Kind::patch && !decl.value) {
            v = make_patch(decl.name, decl.coords);
        } else {
            Elaborator e(scope, nullptr);
            v = e.eval(*decl.value, decl.kind == Declaration::Kind::patch ? Want::patch : Want::any);
        }
        if (decl.kind == Declaration::Kind::patch)
            scope.current = std::get<PatchPtr>(v);
        scope.names.emplace(decl.name, std::move(v));
    }
    flush(f.decls.size());
    return jobs;
}

RunReport run_checkfile(const CheckFile& f, unsigned threads) { return run_jobs(compile_checkfile(f), threads); }

} // namespace dirac
