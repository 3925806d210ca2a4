#pragma once

#include <string>
#include <vector>

#include "report.hpp"

namespace lsym::cli {

/// One regression fixture: an equation with its expected lambda_J,
/// symmetries and first integrals, as grammar strings.
struct CorpusEntry {
    std::string id;
    std::string ode_text;
    std::string expected_lambda;
    std::vector<std::pair<std::string, std::string>> expected_symmetries;  // (tau, eta)
    std::vector<std::string> expected_integrals;
    std::vector<std::string> basis_hints;
    int window = 4;
};

CorpusEntry parse_corpus_entry(const std::string& text, const std::string& origin);
CorpusEntry load_corpus_file(const std::string& path);
/// All *.ode files in the directory, sorted by entry id.
std::vector<CorpusEntry> load_corpus_dir(const std::string& dir);

struct CorpusResult {
    std::string id;
    bool passed = false;
    std::vector<std::string> failures;
    double ms = 0;
};

/// Runs the entry end to end and compares expectations by is_zero of
/// differences and by equivalence class, never by string equality.
CorpusResult run_corpus_entry(const CorpusEntry& entry);

}  // namespace lsym::cli
