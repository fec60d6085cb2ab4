#pragma once

#include "dirac/report.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dirac {

// A call `head(args...)` or an atom whose head is its trimmed source text.
struct Term {
    std::string head;
    std::vector<Term> args;
    bool call = false;
    std::size_t column = 0; // 1-based, not part of equality

    std::string print() const;
};
bool operator==(const Term& a, const Term& b);

// `patch NAME = (c1, c2, ...)` or `patch NAME = total(G)`, and
// `let NAME = term`.
struct Declaration {
    enum class Kind { patch, let };
    Kind kind = Kind::let;
    std::string name;
    std::vector<std::string> coords; // explicit patch coordinates
    std::optional<Term> value;       // let value or derived patch
    std::size_t line = 0;

    std::string print() const;
};
bool operator==(const Declaration& a, const Declaration& b);

enum class Expectation { pass, fail, error };

// `check KIND ARG... [expect pass|fail|error]`. scope counts the declarations
// that precede the check in the file.
struct CheckLine {
    std::string kind;
    std::vector<Term> args;
    std::optional<Expectation> expect;
    std::size_t scope = 0;
    std::size_t line = 0;

    std::string name() const;
    std::string print() const;
};
bool operator==(const CheckLine& a, const CheckLine& b);

struct CheckFile {
    std::vector<Declaration> decls;
    std::vector<CheckLine> checks;
};
bool operator==(const CheckFile& a, const CheckFile& b);

// Throws SyntaxError with 1-based line and column.
CheckFile parse_checkfile(std::string_view text);
// Canonical text; parse_checkfile(print_checkfile(f)) == f.
std::string print_checkfile(const CheckFile& f);

struct CheckResult {
    std::string name;
    bool pass = false;    // verdict after comparing with the expectation
    bool outcome = false; // raw verdict of the check
    std::optional<Expectation> expect;
    std::string witness;
    std::string error; // "Kind: message" when the check raised
    double seconds = 0;
};

struct RunReport {
    std::vector<CheckResult> checks;

    std::size_t passed() const;
    std::size_t failed() const;
    int exit_code() const { return failed() == 0 ? 0 : 1; }
};

// A unit of work for the runner. Errors thrown by run are recorded in the
// result instead of escaping.
struct Job {
    std::string name;
    std::function<Report()> run;
    std::optional<Expectation> expect;
};

// Runs jobs on up to `threads` workers (0: hardware concurrency); results
// keep the order of `jobs`.
RunReport run_jobs(const std::vector<Job>& jobs, unsigned threads = 0);

// Resolves every declaration and check argument up front, so a bad
// reference raises UnknownReference before anything runs. A declaration
// whose constructor raises is reported as CheckError.
std::vector<Job> compile_checkfile(const CheckFile& f);
RunReport run_checkfile(const CheckFile& f, unsigned threads = 0);
RunReport run_checkfile_path(const std::string& path, unsigned threads = 0);

enum class Format { text, json };
// Deterministic for a given report; timings appear only in text with
// with_timing set.
std::string emit_report(const RunReport& r, Format format, bool with_timing = false);

std::string to_string(Expectation e);

} // namespace dirac
