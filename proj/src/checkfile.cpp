#include "dirac/cli.hpp"

#include <cctype>
#include <set>

namespace dirac {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool is_ident(std::string_view s) {
    if (s.empty() || !ident_start(s[0]))
        return false;
    for (char c : s)
        if (!ident_char(c))
            return false;
    return true;
}

// One source line with its 1-based number. Positions are 0-based offsets
// into text; columns reported to the user are offset + 1.
struct Line {
    std::string_view text;
    std::size_t number;

    [[noreturn]] void fail(const std::string& what, std::size_t pos) const {
        throw SyntaxError(what, number, pos + 1);
    }

    std::size_t skip_space(std::size_t pos, std::size_t end) const {
        while (pos < end && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
        return pos;
    }

    std::size_t trim_end(std::size_t begin, std::size_t end) const {
        while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1])))
            --end;
        return end;
    }

    // Offset of the bracket closing the one at `open`, or fails.
    std::size_t matching(std::size_t open, std::size_t end) const {
        std::vector<char> stack;
        for (std::size_t i = open; i < end; ++i) {
            char c = text[i];
            if (c == '(' || c == '[') {
                stack.push_back(c == '(' ? ')' : ']');
            } else if (c == ')' || c == ']') {
                if (stack.empty() || stack.back() != c)
                    fail(std::string("unbalanced '") + c + "'", i);
                stack.pop_back();
                if (stack.empty())
                    return i;
            }
        }
        fail(std::string("unclosed '") + text[open] + "'", open);
    }

    // Splits [begin, end) at top-level occurrences of sep, or at top-level
    // whitespace runs when sep is ' '. Pieces are [begin, end) offset pairs.
    std::vector<std::pair<std::size_t, std::size_t>> split(std::size_t begin, std::size_t end, char sep) const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        std::size_t start = begin;
        for (std::size_t i = begin; i < end; ++i) {
            char c = text[i];
            if (c == '(' || c == '[') {
                i = matching(i, end);
            } else if (c == ')' || c == ']') {
                fail(std::string("unbalanced '") + c + "'", i);
            } else if (sep == ' ' ? std::isspace(static_cast<unsigned char>(c)) : c == sep) {
                if (sep != ' ' || i > start)
                    out.emplace_back(start, i);
                start = i + 1;
            }
        }
        if (sep != ' ' || end > start)
            out.emplace_back(start, end);
        return out;
    }

    Term term(std::size_t begin, std::size_t end) const {
        begin = skip_space(begin, end);
        end = trim_end(begin, end);
        if (begin == end)
            fail("expected an argument", begin);
        Term t;
        t.column = begin + 1;
        std::size_t p = begin;
        while (p < end && ident_char(text[p]))
            ++p;
        if (p > begin && ident_start(text[begin]) && p < end && text[p] == '(' && matching(p, end) == end - 1) {
            t.call = true;
            t.head = std::string(text.substr(begin, p - begin));
            std::size_t inner = skip_space(p + 1, end - 1);
            if (inner < end - 1)
                for (auto [b, e] : split(p + 1, end - 1, ','))
                    t.args.push_back(term(b, e));
            return t;
        }
        split(begin, end, '\0'); // bracket balance only
        t.head = std::string(text.substr(begin, end - begin));
        return t;
    }

    // Reads an identifier at pos; returns its end.
    std::size_t ident(std::size_t pos, std::size_t end, const char* what) const {
        std::size_t p = pos;
        if (p >= end || !ident_start(text[p]))
            fail(std::string("expected ") + what, pos);
        while (p < end && ident_char(text[p]))
            ++p;
        return p;
    }

    std::size_t expect_char(std::size_t pos, std::size_t end, char c) const {
        pos = skip_space(pos, end);
        if (pos >= end || text[pos] != c)
            fail(std::string("expected '") + c + "'", pos);
        return pos + 1;
    }
};

std::optional<Expectation> expectation(std::string_view w) {
    if (w == "pass")
        return Expectation::pass;
    if (w == "fail")
        return Expectation::fail;
    if (w == "error")
        return Expectation::error;
    return std::nullopt;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i)
        out += (i ? sep : "") + parts[i];
    return out;
}

} // namespace

std::string to_string(Expectation e) {
    switch (e) {
    case Expectation::pass:
        return "pass";
    case Expectation::fail:
        return "fail";
    case Expectation::error:
        return "error";
    }
    return "";
}

std::string Term::print() const {
    if (!call)
        return head;
    std::vector<std::string> parts;
    for (const auto& a : args)
        parts.push_back(a.print());
    return head + "(" + join(parts, ", ") + ")";
}

bool operator==(const Term& a, const Term& b) { return a.call == b.call && a.head == b.head && a.args == b.args; }

std::string Declaration::print() const {
    if (kind == Kind::let)
        return "let " + name + " = " + value->print();
    if (value)
        return "patch " + name + " = " + value->print();
    return "patch " + name + " = (" + join(coords, ", ") + ")";
}

bool operator==(const Declaration& a, const Declaration& b) {
    return a.kind == b.kind && a.name == b.name && a.coords == b.coords && a.value == b.value;
}

std::string CheckLine::name() const {
    std::string s = kind;
    for (const auto& a : args)
        s += " " + a.print();
    return s;
}

std::string CheckLine::print() const {
    std::string s = "check " + name();
    if (expect)
        s += " expect " + to_string(*expect);
    return s;
}

bool operator==(const CheckLine& a, const CheckLine& b) {
    return a.kind == b.kind && a.args == b.args && a.expect == b.expect && a.scope == b.scope;
}

bool operator==(const CheckFile& a, const CheckFile& b) { return a.decls == b.decls && a.checks == b.checks; }

CheckFile parse_checkfile(std::string_view text) {
    CheckFile f;
    std::set<std::string> names;
    std::size_t number = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos)
            nl = text.size();
        Line ln{text.substr(start, nl - start), ++number};
        start = nl + 1;

        std::size_t end = ln.text.find('#');
        if (end == std::string_view::npos)
            end = ln.text.size();
        end = ln.trim_end(0, end);
        std::size_t pos = ln.skip_space(0, end);
        if (pos == end)
            continue;

        std::size_t kw_end = ln.ident(pos, end, "'patch', 'let' or 'check'");
        std::string_view kw = ln.text.substr(pos, kw_end - pos);

        if (kw == "patch" || kw == "let") {
            Declaration d;
            d.kind = kw == "patch" ? Declaration::Kind::patch : Declaration::Kind::let;
            d.line = ln.number;
            std::size_t np = ln.skip_space(kw_end, end);
            std::size_t ne = ln.ident(np, end, "a name");
            d.name = std::string(ln.text.substr(np, ne - np));
            if (!names.insert(d.name).second)
                ln.fail("duplicate name '" + d.name + "'", np);
            std::size_t rhs = ln.skip_space(ln.expect_char(ne, end, '='), end);
            if (rhs == end)
                ln.fail("expected a value", rhs);
            if (d.kind == Declaration::Kind::patch && ln.text[rhs] == '(') {
                std::size_t close = ln.matching(rhs, end);
                if (close != end - 1)
                    ln.fail("unexpected text after coordinates", close + 1);
                std::set<std::string> seen;
                if (ln.skip_space(rhs + 1, close) < close)
                    for (auto [b, e] : ln.split(rhs + 1, close, ',')) {
                        b = ln.skip_space(b, e);
                        e = ln.trim_end(b, e);
                        std::string c(ln.text.substr(b, e - b));
                        if (!is_ident(c))
                            ln.fail("expected a coordinate name", b);
                        if (!seen.insert(c).second)
                            ln.fail("duplicate coordinate '" + c + "'", b);
                        d.coords.push_back(c);
                    }
            } else {
                d.value = ln.term(rhs, end);
                if (d.kind == Declaration::Kind::patch && !d.value->call)
                    ln.fail("expected coordinates or a patch constructor", rhs);
            }
            f.decls.push_back(std::move(d));
        } else if (kw == "check") {
            CheckLine c;
            c.line = ln.number;
            c.scope = f.decls.size();
            auto words = ln.split(kw_end, end, ' ');
            if (words.empty())
                ln.fail("expected a check kind", end);
            std::size_t first = words[0].first;
            std::size_t ke = ln.ident(first, words[0].second, "a check kind");
            if (ke != words[0].second)
                ln.fail("expected a check kind", first);
            c.kind = std::string(ln.text.substr(first, ke - first));
            std::size_t n = words.size();
            if (n >= 2 && ln.text.substr(words[n - 2].first, words[n - 2].second - words[n - 2].first) == "expect") {
                auto [b, e] = words[n - 1];
                c.expect = expectation(ln.text.substr(b, e - b));
                if (!c.expect)
                    ln.fail("expected 'pass', 'fail' or 'error'", b);
                n -= 2;
            }
            for (std::size_t i = 1; i < n; ++i)
                c.args.push_back(ln.term(words[i].first, words[i].second));
            f.checks.push_back(std::move(c));
        } else {
            ln.fail("expected 'patch', 'let' or 'check'", pos);
        }
        if (nl == text.size())
            break;
    }
    return f;
}

std::string print_checkfile(const CheckFile& f) {
    std::string out;
    std::size_t c = 0;
    for (std::size_t d = 0; d <= f.decls.size(); ++d) {
        for (; c < f.checks.size() && f.checks[c].scope <= d; ++c)
            out += f.checks[c].print() + "\n";
        if (d < f.decls.size())
            out += f.decls[d].print() + "\n";
    }
    return out;
}

} // namespace dirac
