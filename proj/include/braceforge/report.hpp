// Verdict reporting for exhaustive structure checks.
//
// Every validation routine in this library produces a Report: a list of
// named verdicts, each either passing or failing with a witness tuple of
// element indices.  Structural problems (wrong dimensions, out-of-range
// entries, carrier too large) are kept separate from axiom failures so a
// malformed input is never confused with a disproved identity.

#pragma once

#include <chrono>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace braceforge {

struct Verdict {
    std::string name;
    bool pass = false;
    std::vector<int> witness;  // lexicographically first violating tuple
    std::string detail;
};

struct Report {
    std::string subject;
    std::vector<Verdict> verdicts;
    std::optional<std::string> structural;  // set => input malformed, no verdicts were run
    bool exhaustive = true;                 // false when a check had to sample
    double seconds = 0.0;

    bool ok() const {
        if (structural) return false;
        for (const auto& v : verdicts)
            if (!v.pass) return false;
        return true;
    }

    const Verdict* find(const std::string& name) const {
        for (const auto& v : verdicts)
            if (v.name == name) return &v;
        return nullptr;
    }

    Verdict& add(std::string name, bool pass, std::vector<int> witness = {},
                 std::string detail = {}) {
        verdicts.push_back(Verdict{std::move(name), pass, std::move(witness), std::move(detail)});
        return verdicts.back();
    }

    // Plain-text rendering; one line per verdict.  Timing is deliberately not
    // part of the stream so identical inputs yield byte-identical output.
    void print(std::ostream& os) const {
        if (structural) {
            os << subject << ": error: " << *structural << '\n';
            return;
        }
        for (const auto& v : verdicts) {
            os << subject << ": " << v.name << ": " << (v.pass ? "ok" : "FAIL");
            if (!v.pass && !v.witness.empty()) {
                os << "  witness=(";
                for (std::size_t i = 0; i < v.witness.size(); ++i)
                    os << (i ? "," : "") << v.witness[i];
                os << ")";
            }
            if (!v.detail.empty()) os << "  [" << v.detail << "]";
            os << '\n';
        }
        if (!exhaustive) os << subject << ": note: non-exhaustive (sampled) check\n";
    }
};

// Result of a validating constructor: either the constructed value plus its
// report, or just the report describing what failed.  The report may carry
// failing verdicts even when the value exists (e.g. a valid brace that is
// not two-sided); report.ok() distinguishes the two.
template <class T>
struct Validated {
    std::optional<T> value;
    Report report;

    bool ok() const { return value.has_value(); }
    explicit operator bool() const { return ok(); }
    const T& operator*() const { return *value; }
    const T* operator->() const { return &*value; }
    T& operator*() { return *value; }
    T* operator->() { return &*value; }
};

class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace braceforge
