#pragma once

#include <optional>
#include <vector>

#include "zkforge/circuit.hpp"
#include "zkforge/mutation.hpp"

namespace zkforge {

enum class ExecStatus { kOk, kAbort, kBudget };

enum class AbortKind { kAssertionFailure, kDivisionByZero, kOutOfRangeSubscript };

const char* abort_kind_name(AbortKind k);

struct AbortInfo {
    AbortKind kind = AbortKind::kAssertionFailure;
    int instr = -1;
    mpz_class subscript;  // offending value, out-of-range only
    int length = 0;       // array extent, out-of-range only
};

/* Recorded when an equality assertion fails against an input slot that no
 * earlier instruction has read: binding that slot to the other side's value
 * is a candidate repair of the input vector. */
struct HashPatch {
    int slot = -1;
    FieldElement value;
};

struct ExecutionTrace {
    std::vector<FieldElement> slots;  // full assignment, layout order
    ExecStatus status = ExecStatus::kOk;
    AbortInfo abort;
    std::optional<HashPatch> hash_patch;
    long long executed = 0;  // instructions run

    bool ok() const { return status == ExecStatus::kOk; }
};

inline constexpr long long kDefaultExecBudget = 10'000'000;

/* Compare output vectors of two ok traces. */
bool outputs_equal(const CompiledCircuit& c, const ExecutionTrace& a,
                   const ExecutionTrace& b);

/* Reusable interpreter for one circuit; keeps scratch buffers between runs.
 * Not thread-safe; use one per worker. */
class Executor {
  public:
    explicit Executor(const CompiledCircuit& c, long long budget = kDefaultExecBudget);

    /* mutant = nullptr runs the original computation with assertions live.
     * Any non-null mutant, the empty genome included, skips assertions. */
    ExecutionTrace run(const std::vector<FieldElement>& x,
                       const MutantGenome* mutant = nullptr);

  private:
    bool eval(const CompiledRhs& tape, int instr_idx, ExecutionTrace& tr,
              FieldElement& out);

    const CompiledCircuit& c_;
    long long budget_;
    std::vector<FieldElement> regs_;
    std::vector<int> first_read_;  // instruction that first read each input slot
    std::vector<std::pair<int, ast::BinOp>> op_subs_;  // active (occ, replacement)
};

/* One-shot convenience wrapper. */
ExecutionTrace execute(const CompiledCircuit& c, const std::vector<FieldElement>& x,
                       const MutantGenome* mutant = nullptr,
                       long long budget = kDefaultExecBudget);

} // namespace zkforge
