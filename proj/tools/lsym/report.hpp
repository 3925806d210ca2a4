#pragma once

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lsym/jlm.hpp"
#include "lsym/lambda.hpp"
#include "lsym/reduce.hpp"

namespace lsym::cli {

struct AnalysisOptions {
    int window = 4;            // tau/eta monomial window
    int invariant_window = 4;  // invariant basis window
    int reduce_window = 5;     // reduced-rhs window
    std::vector<std::string> extra_generators;
};

struct SymmetryReport {
    std::string tau;
    std::string eta;
    std::string lambda;
    int equivalence_class = 0;
};

struct AnalysisReport {
    std::string ode;
    std::string lambda_j;
    bool zero_divergence = false;
    std::vector<SymmetryReport> symmetries;
    struct Pair {
        std::string t1;
        std::string y1;
    };
    std::vector<Pair> invariant_pairs;
    std::optional<std::string> reduced_equation;  // rendered G(t1, y1)
    std::vector<std::string> first_integrals;
    struct Diagnostics {
        bool probabilistic_zero = false;
        std::size_t basis_size = 0;
        std::size_t invariant_basis_size = 0;
        std::map<std::string, double> timings_ms;
    } diagnostics;
};

/// End-to-end pipeline: lambda_J, determining solver, equivalence classes,
/// invariants of the first symmetry, reduction, quadrature (where the
/// closed form exists) and verification of every derived integral.
AnalysisReport analyze(const std::string& ode_text, const AnalysisOptions& opt = {});

nlohmann::ordered_json to_json(const AnalysisReport& r, bool with_timings = true);
std::string to_text(const AnalysisReport& r);

/// Exit codes shared by the command-line tools.
int exit_code_for(ErrorCode c);

}  // namespace lsym::cli
