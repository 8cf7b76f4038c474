#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "zkforge/executor.hpp"
#include "zkforge/fitness.hpp"
#include "zkforge/mutation.hpp"
#include "zkforge/selectors.hpp"

namespace zkforge {

enum class Detect { kUnder, kOver, kBoth };

struct FuzzConfig {
    uint64_t seed = 0;
    long long max_generations = 50000;
    double timeout_secs = 7200.0;
    int population = 30;  // also the number of inputs per generation
    double mutation_prob = 0.3;
    double crossover_prob = 0.5;
    double op_sub_prob = 0.1;
    double zero_div_prob = 0.2;
    double hash_check_prob = 0.2;
    bool core_mode = false;  // default is the weak-assignment-only mode
    Detect detect = Detect::kBoth;
    std::set<std::string> whitelist = {"IsZero", "Num2Bits"};
    bool exhaustive = false;
    bool extra_operators = false;  // optional add-constant/delete mutations
    int guard_threshold = 8;
    int threads = 0;  // 0 = ZKFORGE_THREADS or hardware concurrency
};

enum class Verdict { kUnder, kOver };

struct BugReport {
    Verdict verdict = Verdict::kUnder;
    std::vector<FieldElement> input;
    ExecutionTrace original;
    std::optional<ExecutionTrace> mutated;  // under only
    MutantGenome genome;                    // under only
    long long generation = 0;
    long long elapsed_executions = 0;
};

struct FuzzStats {
    long long generations = 0;
    long long executions = 0;
    double wall_secs = 0.0;
    int under_reports = 0;
    int over_reports = 0;
    std::string stop_reason;  // found-all | generation-cap | timeout
};

struct FuzzResult {
    std::vector<BugReport> reports;
    FuzzStats stats;
};

using ReportSink = std::function<void(const BugReport&)>;

FuzzResult fuzz(const CompiledCircuit& circuit, const FuzzConfig& config,
                const ReportSink& sink = {});

} // namespace zkforge
