#include "zkforge/engine.hpp"

#include <chrono>
#include <cstdlib>
#include <map>
#include <thread>

namespace zkforge {

namespace {

using Clock = std::chrono::steady_clock;

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("ZKFORGE_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

std::string site_signature(const MutantGenome& g) {
    std::string s;
    for (const auto& [site, act] : g) {
        (void)act;
        s += std::to_string(site.instr);
        s += site.kind == SiteKind::kRhs ? 'r' : 'o';
        if (site.kind == SiteKind::kOp) s += std::to_string(site.occ);
        s += ';';
    }
    return s;
}

struct Engine {
    const CompiledCircuit& c;
    const FuzzConfig& cfg;
    const ReportSink& sink;

    SkewedSampler sampler;
    ArrayGuardState guard;
    SiteSet sites;
    std::vector<ZeroDivTarget> zero_div;
    MutationParams mparams;

    FuzzResult result;
    Clock::time_point t0;
    long long executions = 0;

    bool want_under, want_over;
    bool found_under = false, found_over = false;
    std::set<std::string> emitted;  // exhaustive-mode dedup keys

    Engine(const CompiledCircuit& c_, const FuzzConfig& cfg_, const ReportSink& sink_)
        : c(c_), cfg(cfg_), sink(sink_), sampler(c_.field),
          guard(c_, cfg_.guard_threshold),
          sites(enumerate_sites(c_, cfg_.whitelist, cfg_.core_mode)),
          zero_div(find_zero_div_targets(c_)) {
        mparams.mutation_prob = cfg.mutation_prob;
        mparams.op_sub_prob = cfg.op_sub_prob;
        mparams.core_mode = cfg.core_mode;
        mparams.extra_operators = cfg.extra_operators;
        want_under = cfg.detect != Detect::kOver;
        want_over = cfg.detect != Detect::kUnder;
    }

    double elapsed_secs() const {
        return std::chrono::duration<double>(Clock::now() - t0).count();
    }

    bool timed_out() const { return elapsed_secs() >= cfg.timeout_secs; }

    bool under_active() const { return want_under && (cfg.exhaustive || !found_under); }
    bool over_active() const { return want_over && (cfg.exhaustive || !found_over); }
    bool done() const {
        if (cfg.exhaustive) return false;
        return (!want_under || found_under) && (!want_over || found_over);
    }

    void emit(BugReport&& r) {
        if (cfg.exhaustive) {
            std::string key = r.verdict == Verdict::kOver
                                  ? std::string("over")
                                  : "under:" + site_signature(r.genome);
            if (!emitted.insert(key).second) return;
        }
        if (r.verdict == Verdict::kUnder) {
            found_under = true;
            ++result.stats.under_reports;
        } else {
            found_over = true;
            ++result.stats.over_reports;
        }
        if (sink) sink(r);
        result.reports.push_back(std::move(r));
    }

    /* Sample, zero-div-patch and hash-check-patch the generation's inputs,
     * executing the original on each. Returns false on timeout. */
    bool prepare_inputs(long long gen, std::vector<std::vector<FieldElement>>& inputs,
                        std::vector<ExecutionTrace>& originals, Executor& ex) {
        inputs.clear();
        originals.clear();
        for (int j = 0; j < cfg.population; ++j) {
            if (timed_out()) return false;
            Rng rin = derive_rng(cfg.seed, static_cast<uint64_t>(gen), Stream::kInput,
                                 static_cast<uint64_t>(j));
            std::vector<FieldElement> x = sample_input(sampler, c.layout, guard, rin);
            if (!zero_div.empty()) {
                Rng rzd = derive_rng(cfg.seed, static_cast<uint64_t>(gen),
                                     Stream::kZeroDiv, static_cast<uint64_t>(j));
                apply_zero_div(c, zero_div, x, cfg.zero_div_prob, rzd);
            }
            ExecutionTrace tr = ex.run(x, nullptr);
            ++executions;

            /* Hash-check both sides: a failed equality assertion against an
             * unread input can be repaired by copying the other side's
             * value; chase a bounded chain of such repairs. */
            Rng rh = derive_rng(cfg.seed, static_cast<uint64_t>(gen), Stream::kHash,
                                static_cast<uint64_t>(j));
            int patches = 0;
            while (tr.status == ExecStatus::kAbort && tr.hash_patch && patches < 16) {
                if (!rh.chance(cfg.hash_check_prob)) break;
                x[static_cast<size_t>(tr.hash_patch->slot)] = tr.hash_patch->value;
                ++patches;
                tr = ex.run(x, nullptr);
                ++executions;
            }

            if (tr.status == ExecStatus::kAbort) guard.observe_abort(tr.abort);
            inputs.push_back(std::move(x));
            originals.push_back(std::move(tr));
        }
        return true;
    }

    void over_check(long long gen, const std::vector<std::vector<FieldElement>>& inputs,
                    const std::vector<ExecutionTrace>& originals) {
        for (size_t j = 0; j < inputs.size(); ++j) {
            if (!over_active()) return;
            const ExecutionTrace& tr = originals[j];
            if (!tr.ok()) continue;
            if (constraint_error(c, tr) == 0) continue;
            // independent confirmation on a fresh interpreter
            ExecutionTrace again = execute(c, inputs[j]);
            ++executions;
            if (!again.ok() || constraint_error(c, again) == 0) continue;
            BugReport r;
            r.verdict = Verdict::kOver;
            r.input = inputs[j];
            r.original = std::move(again);
            r.generation = gen;
            r.elapsed_executions = executions;
            emit(std::move(r));
        }
    }

    std::vector<MutantGenome> evolve(long long gen,
                                     const std::vector<MutantGenome>& prev,
                                     const std::vector<FitnessScore>& prev_scores) {
        std::vector<MutantGenome> pop;
        pop.reserve(static_cast<size_t>(cfg.population));
        RouletteTable table;
        bool have_parents = !prev.empty();
        if (have_parents) table = make_roulette(prev_scores);
        for (int i = 0; i < cfg.population; ++i) {
            Rng rs = derive_rng(cfg.seed, static_cast<uint64_t>(gen), Stream::kSlot,
                                static_cast<uint64_t>(i));
            if (have_parents && rs.chance(cfg.crossover_prob)) {
                const MutantGenome& a = prev[roulette_pick(table, rs)];
                const MutantGenome& b = prev[roulette_pick(table, rs)];
                pop.push_back(crossover(a, b, rs));
            } else {
                pop.push_back(random_mutant(sites, sampler, mparams, rs));
            }
        }
        return pop;
    }

    /* Execute one genome over all inputs. Identity genomes reuse the
     * original trace wherever it is ok (same semantics, assertions all
     * passed). */
    void run_row(Executor& ex, const MutantGenome& g,
                 const std::vector<std::vector<FieldElement>>& inputs,
                 const std::vector<ExecutionTrace>& originals,
                 std::vector<ExecutionTrace>& row, long long& execs) {
        row.clear();
        row.reserve(inputs.size());
        for (size_t j = 0; j < inputs.size(); ++j) {
            if (g.empty() && originals[j].ok()) {
                row.push_back(originals[j]);
            } else {
                row.push_back(ex.run(inputs[j], &g));
                ++execs;
            }
        }
    }

    void fuzz_loop() {
        t0 = Clock::now();
        std::vector<MutantGenome> population, prev_population;
        std::vector<FitnessScore> prev_scores;
        Executor ex(c);
        std::vector<std::vector<FieldElement>> inputs;
        std::vector<ExecutionTrace> originals;

        int threads = resolve_threads(cfg.threads);

        long long gen = 0;
        for (; gen < cfg.max_generations; ++gen) {
            if (timed_out()) {
                result.stats.stop_reason = "timeout";
                break;
            }
            if (!prepare_inputs(gen, inputs, originals, ex)) {
                result.stats.stop_reason = "timeout";
                break;
            }
            if (want_over) over_check(gen, inputs, originals);
            if (done()) {
                ++gen;
                result.stats.stop_reason = "found-all";
                break;
            }

            if (under_active()) {
                population = evolve(gen, prev_population, prev_scores);

                /* Deduplicate identical genomes: only the first occurrence
                 * is executed; the rest share its row. */
                std::map<std::string, size_t> first_by_key;
                std::vector<size_t> alias(population.size());
                std::vector<size_t> unique_rows;
                for (size_t i = 0; i < population.size(); ++i) {
                    auto [it, fresh] =
                        first_by_key.try_emplace(genome_key(population[i]), i);
                    alias[i] = it->second;
                    if (fresh) unique_rows.push_back(i);
                }

                std::vector<std::vector<ExecutionTrace>> rows(population.size());
                if (threads <= 1 || unique_rows.size() <= 1) {
                    for (size_t i : unique_rows)
                        run_row(ex, population[i], inputs, originals, rows[i],
                                executions);
                } else {
                    size_t nw = std::min(static_cast<size_t>(threads),
                                         unique_rows.size());
                    std::vector<long long> wexec(nw, 0);
                    std::vector<std::thread> workers;
                    auto work = [&](size_t w) {
                        Executor wex(c);
                        for (size_t u = w; u < unique_rows.size(); u += nw) {
                            size_t i = unique_rows[u];
                            run_row(wex, population[i], inputs, originals, rows[i],
                                    wexec[w]);
                        }
                    };
                    for (size_t w = 1; w < nw; ++w) workers.emplace_back(work, w);
                    work(0);
                    for (auto& t : workers) t.join();
                    for (long long e : wexec) executions += e;
                }
                for (size_t i = 0; i < population.size(); ++i)
                    if (alias[i] != i) rows[i] = rows[alias[i]];

                /* Scan for under-constraint candidates in deterministic
                 * order, confirm each on a fresh execution. */
                std::vector<FitnessScore> scores(population.size(),
                                                 FitnessScore::inf());
                for (size_t i = 0; i < population.size(); ++i) {
                    scores[i] = score_from_traces(c, rows[i], originals);
                    if (!under_active()) continue;
                    if (alias[i] != i) continue;  // duplicates report once
                    for (size_t j = 0; j < inputs.size(); ++j) {
                        const ExecutionTrace& mt = rows[i][j];
                        if (!mt.ok()) continue;
                        bool divergent =
                            !originals[j].ok() || !outputs_equal(c, mt, originals[j]);
                        if (!divergent) continue;
                        if (constraint_error(c, mt) != 0) continue;
                        ExecutionTrace again = execute(c, inputs[j], &population[i]);
                        ++executions;
                        if (!again.ok()) continue;
                        bool div2 = !originals[j].ok() ||
                                    !outputs_equal(c, again, originals[j]);
                        if (!div2 || !satisfies(c, again)) continue;
                        BugReport r;
                        r.verdict = Verdict::kUnder;
                        r.input = inputs[j];
                        r.original = originals[j];
                        r.mutated = std::move(again);
                        r.genome = population[i];
                        r.generation = gen;
                        r.elapsed_executions = executions;
                        emit(std::move(r));
                        if (!under_active()) break;
                    }
                }
                prev_population = std::move(population);
                prev_scores = std::move(scores);
            }

            if (done()) {
                ++gen;
                result.stats.stop_reason = "found-all";
                break;
            }
        }
        result.stats.generations = gen;
        if (result.stats.stop_reason.empty())
            result.stats.stop_reason =
                timed_out() ? "timeout" : "generation-cap";
        result.stats.executions = executions;
        result.stats.wall_secs = elapsed_secs();
    }
};

} // namespace

FuzzResult fuzz(const CompiledCircuit& circuit, const FuzzConfig& config,
                const ReportSink& sink) {
    Engine e(circuit, config, sink);
    e.fuzz_loop();
    return e.result;
}

} // namespace zkforge
