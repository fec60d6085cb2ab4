#include "dirac/cli.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

namespace dirac {

std::size_t RunReport::passed() const {
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return c.pass; }));
}

std::size_t RunReport::failed() const { return checks.size() - passed(); }

namespace {

CheckResult execute(const Job& job) {
    CheckResult r;
    r.name = job.name;
    r.expect = job.expect;
    auto start = std::chrono::steady_clock::now();
    bool raised = false;
    try {
        Report rep = job.run();
        r.outcome = rep.pass;
        r.witness = rep.witness;
    } catch (const Error& e) {
        raised = true;
        r.error = std::string(e.kind()) + ": " + e.what();
    } catch (const std::exception& e) {
        raised = true;
        r.error = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!job.expect)
        r.pass = !raised && r.outcome;
    else if (*job.expect == Expectation::error)
        r.pass = raised;
    else
        r.pass = !raised && r.outcome == (*job.expect == Expectation::pass);
    return r;
}

} // namespace

RunReport run_jobs(const std::vector<Job>& jobs, unsigned threads) {
    RunReport report;
    report.checks.resize(jobs.size());
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, jobs.size()));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < jobs.size();)
            report.checks[i] = execute(jobs[i]);
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();
    return report;
}

RunReport run_checkfile_path(const std::string& path, unsigned threads) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw CheckError("cannot read " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return run_checkfile(parse_checkfile(text.str()), threads);
}

std::string emit_report(const RunReport& r, Format format, bool with_timing) {
    if (format == Format::json) {
        nlohmann::ordered_json checks = nlohmann::ordered_json::array();
        for (const auto& c : r.checks) {
            nlohmann::ordered_json j;
            j["name"] = c.name;
            j["verdict"] = c.pass ? "pass" : "fail";
            if (c.expect)
                j["expect"] = to_string(*c.expect);
            if (!c.witness.empty())
                j["witness"] = c.witness;
            if (!c.error.empty())
                j["error"] = c.error;
            checks.push_back(std::move(j));
        }
        nlohmann::ordered_json out;
        out["checks"] = std::move(checks);
        out["summary"] = {{"pass", r.passed()}, {"fail", r.failed()}};
        return out.dump(2) + "\n";
    }

    std::size_t width = 0, expect_width = 0;
    for (const auto& c : r.checks) {
        width = std::max(width, c.name.size());
        if (c.expect)
            expect_width = std::max(expect_width, 7 + to_string(*c.expect).size());
    }
    std::string out;
    for (const auto& c : r.checks) {
        std::string line = c.pass ? "PASS  " : "FAIL  ";
        line += c.name + std::string(width - c.name.size(), ' ');
        if (expect_width) {
            std::string e = c.expect ? "expect " + to_string(*c.expect) : "";
            line += "  " + e + std::string(expect_width - e.size(), ' ');
        }
        if (!c.witness.empty())
            line += "  witness " + c.witness;
        if (!c.error.empty())
            line += "  " + c.error;
        if (with_timing) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "  %.3fs", c.seconds);
            line += buf;
        }
        while (!line.empty() && line.back() == ' ')
            line.pop_back();
        out += line + "\n";
    }
    out += std::to_string(r.checks.size()) + " checks: " + std::to_string(r.passed()) + " pass, " +
           std::to_string(r.failed()) + " fail\n";
    return out;
}

} // namespace dirac
