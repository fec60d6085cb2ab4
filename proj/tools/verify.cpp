#include "dirac/cli.hpp"
#include "dirac/suite.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Check polynomial Dirac, Poisson and groupoid identities"};
    std::string file, suite, format = "text";
    bool timing = false;
    unsigned threads = 0;
    app.add_option("file", file, "check file to run");
    app.add_option("--format", format, "report format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--suite", suite, "run a built-in library instead of a file")
        ->check(CLI::IsMember(dirac::suite_names()));
    app.add_flag("--timing", timing, "append per-check timings to the text report");
    app.add_option("--threads", threads, "worker threads (0: one per core)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    if (file.empty() == suite.empty()) {
        std::cerr << "verify: give either a check file or --suite\n" << app.help();
        return 2;
    }

    dirac::RunReport report;
    try {
        report = suite.empty() ? dirac::run_checkfile_path(file, threads)
                               : dirac::run_jobs(dirac::suite_jobs(suite), threads);
    } catch (const dirac::Error& e) {
        std::cerr << "verify: " << e.kind() << ": " << e.what() << "\n";
        return 2;
    }
    std::cout << dirac::emit_report(report, format == "json" ? dirac::Format::json : dirac::Format::text, timing);
    return report.exit_code();
}
