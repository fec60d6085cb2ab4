#pragma once

#include "dirac/symalg.hpp"

#include <string>
#include <vector>

namespace dirac {

// Verdict of a check. A failing report always carries a witness: a
// serialized polynomial or an index tuple that can be re-checked by hand.
struct Report {
    std::string name;
    bool pass = true;
    std::string witness;
    std::string note;
    std::vector<Report> parts;

    static Report ok(std::string name, std::string note = {}) {
        Report r;
        r.name = std::move(name);
        r.note = std::move(note);
        return r;
    }
    static Report fail(std::string name, std::string witness, std::string note = {}) {
        Report r;
        r.name = std::move(name);
        r.pass = false;
        r.witness = std::move(witness);
        r.note = std::move(note);
        return r;
    }

    // Appends a sub-check; the first failing part supplies the witness.
    Report& add(Report part) {
        if (!part.pass && pass) {
            pass = false;
            witness = part.witness;
        }
        parts.push_back(std::move(part));
        return *this;
    }

    const Report* part(const std::string& n) const {
        for (const auto& p : parts)
            if (p.name == n)
                return &p;
        return nullptr;
    }
};

// "label[i,j,k] = value" with 1-based indices.
inline std::string index_witness(const std::string& label, const std::vector<std::size_t>& idx, const Expr& value) {
    std::string s = label + "[";
    for (std::size_t k = 0; k < idx.size(); ++k)
        s += (k ? "," : "") + std::to_string(idx[k] + 1);
    return s + "] = " + value.to_string();
}

} // namespace dirac
