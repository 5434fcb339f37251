#include "torsionlab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "torsionlab/errors.hpp"

namespace torsionlab {

namespace {

CokernelSummary prefix_cokernel(const SparseIntMatrix& full, std::size_t m,
                                const ExactOptions& exact) {
  std::vector<std::size_t> cols(m);
  std::iota(cols.begin(), cols.end(), std::size_t{0});
  return cokernel(restrict_columns(full, cols), exact);
}

}  // namespace

ProcessTrace run_process_on(const Hypergraph& order, SignPattern pattern,
                            const ProcessOptions& options) {
  const std::size_t every = options.record_every;
  const std::size_t m_max = order.edge_count();
  const SparseIntMatrix full = incidence_matrix(order, pattern);

  ProcessTrace trace;
  trace.n = order.n();
  trace.k = order.k();
  trace.pattern = pattern;

  bool previous_torsion = false;
  std::size_t last_recorded = 0;
  for (std::size_t m = 0; m <= m_max; ++m) {
    const bool scheduled = m == 0 || m == m_max || (every > 0 && m % every == 0);
    if (!scheduled && !previous_torsion) continue;
    StepRecord rec{m, prefix_cokernel(full, m, options.exact)};
    if (rec.coker.has_torsion() && m > 0 && last_recorded + 1 < m) {
      for (std::size_t back = last_recorded + 1; back < m; ++back) {
        trace.steps.push_back({back, prefix_cokernel(full, back, options.exact)});
      }
    }
    previous_torsion = rec.coker.has_torsion();
    last_recorded = m;
    trace.steps.push_back(std::move(rec));
  }
  return trace;
}

ProcessTrace run_process(std::size_t n, std::size_t k, std::size_t m_max, SignPattern pattern,
                         std::uint64_t seed, std::uint64_t trial_id,
                         const ProcessOptions& options) {
  if (options.record_every < 1) throw ParameterError("record_every must be at least 1");
  const Hypergraph order = sample_gnm(n, k, m_max, seed, trial_id);
  ProcessTrace trace = run_process_on(order, pattern, options);
  trace.seed = seed;
  trace.trial_id = trial_id;
  return trace;
}

BurstSummary detect_burst(const ProcessTrace& trace) {
  BurstSummary out;
  for (const auto& rec : trace.steps) {
    if (!rec.coker.has_torsion()) continue;
    if (!out.first_step) out.first_step = rec.step;
    out.last_step = rec.step;
    ++out.torsion_steps;
    if (rec.coker.torsion_order > out.max_torsion_order) {
      out.max_torsion_order = rec.coker.torsion_order;
    }
  }
  return out;
}

std::string_view to_string(ParamKind kind) {
  switch (kind) {
    case ParamKind::p:
      return "p";
    case ParamKind::m:
      return "m";
    case ParamKind::c:
      return "c";
  }
  return "?";
}

mpq_class probability_from_c(std::size_t n, std::size_t k, const mpq_class& c) {
  if (c < 0) throw ParameterError("c must be non-negative");
  const double p = c.get_d() * std::log(double(n)) / std::pow(double(n), double(k - 1));
  return mpq_class(std::min(p, 1.0));
}

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<SweepRecord> sweep(const std::vector<SweepCell>& cells, const SweepOptions& options) {
  if (options.trials < 1) throw ParameterError("trials must be at least 1");

  struct TrialOutcome {
    std::optional<ProcessTrace> trace;
    std::string error;
  };

  std::vector<SweepRecord> records;
  records.reserve(cells.size());
  for (const SweepCell& cell : cells) {
    std::optional<mpq_class> p;
    if (cell.kind == ParamKind::p) p = cell.value;
    if (cell.kind == ParamKind::c) p = probability_from_c(cell.n, cell.k, cell.value);

    std::vector<TrialOutcome> outcomes(options.trials);
    parallel_for(options.trials, options.parallelism, [&](std::size_t t) {
      try {
        const Hypergraph h =
            p ? sample_gnp(cell.n, cell.k, *p, options.seed, t)
              : sample_gnm(cell.n, cell.k, cell.value.get_num().get_ui(), options.seed, t);
        ProcessOptions popts;
        popts.record_every = options.record_every;
        popts.exact = options.exact;
        outcomes[t].trace = run_process_on(h, cell.pattern, popts);
      } catch (const std::exception& e) {
        outcomes[t].error = "trial " + std::to_string(t) + ": " + e.what();
      }
    });

    SweepRecord rec;
    rec.cell = cell;
    rec.trials = options.trials;
    std::size_t free_rank_sum = 0;
    std::size_t succeeded = 0;
    for (const auto& outcome : outcomes) {
      if (!outcome.trace) {
        rec.errors.push_back(outcome.error);
        continue;
      }
      ++succeeded;
      const CokernelSummary& last = outcome.trace->steps.back().coker;
      free_rank_sum += last.free_rank;
      if (last.has_torsion()) ++rec.torsion_final;
      if (!last.has_torsion() && last.free_rank == 0) ++rec.trivial;
      if (!last.has_torsion() && last.free_rank == 1) ++rec.coker_z;
      if (last.free_rank >= 1) ++rec.free_rank_at_least_one;
      const BurstSummary burst = detect_burst(*outcome.trace);
      if (!burst.empty()) {
        ++rec.torsion_ever;
        rec.burst_min = std::min(rec.burst_min.value_or(*burst.first_step), *burst.first_step);
        rec.burst_max = std::max(rec.burst_max.value_or(*burst.last_step), *burst.last_step);
      }
    }
    rec.mean_free_rank = succeeded == 0 ? 0.0 : double(free_rank_sum) / double(succeeded);
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<CurvePoint> torsion_probability_curve(std::size_t n, std::size_t k,
                                                  const std::vector<std::size_t>& m_grid,
                                                  const CurveOptions& options) {
  if (options.trials < 1) throw ParameterError("trials must be at least 1");
  const std::uint64_t space = edge_space_size(n, k);
  std::size_t m_top = 0;
  for (const std::size_t m : m_grid) {
    if (m > space) throw ParameterError("curve grid point exceeds C(n, k)");
    m_top = std::max(m_top, m);
  }

  // hits[t][g] == 1 iff trial t has torsion at grid point g.
  std::vector<std::vector<char>> hits(options.trials, std::vector<char>(m_grid.size(), 0));
  parallel_for(options.trials, options.parallelism, [&](std::size_t t) {
    const Hypergraph order = sample_gnm(n, k, m_top, options.seed, t);
    const SparseIntMatrix full = incidence_matrix(order, options.pattern);
    for (std::size_t g = 0; g < m_grid.size(); ++g) {
      hits[t][g] = prefix_cokernel(full, m_grid[g], options.exact).has_torsion() ? 1 : 0;
    }
  });

  std::vector<CurvePoint> curve;
  curve.reserve(m_grid.size());
  for (std::size_t g = 0; g < m_grid.size(); ++g) {
    CurvePoint point{m_grid[g], options.trials, 0};
    for (std::size_t t = 0; t < options.trials; ++t) point.with_torsion += hits[t][g];
    curve.push_back(point);
  }
  return curve;
}

std::size_t n_star(std::size_t n, std::size_t k) {
  if (k < 2) throw ParameterError("k must be at least 2");
  return k % 2 == 1 ? n : (n == 0 ? 0 : n - 1);
}

}  // namespace torsionlab
