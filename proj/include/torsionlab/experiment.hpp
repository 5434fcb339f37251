#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "torsionlab/exactla.hpp"
#include "torsionlab/matrix.hpp"
#include "torsionlab/model.hpp"

namespace torsionlab {

struct StepRecord {
  std::size_t step = 0;  // number of columns in the prefix
  CokernelSummary coker;
};

struct ProcessTrace {
  std::size_t n = 0;
  std::size_t k = 0;
  SignPattern pattern = SignPattern::alternating;
  std::uint64_t seed = 0;
  std::uint64_t trial_id = 0;
  std::vector<StepRecord> steps;
};

struct ProcessOptions {
  /// Record every record_every-th prefix. Steps following a torsion step are
  /// always recorded, and the unrecorded gap before a torsion step is filled
  /// in, so torsion windows are resolved step by step.
  std::size_t record_every = 1;
  ExactOptions exact;
};

/// Samples an edge order from H_k(n, m_max) and records the cokernel of the
/// incidence matrix of each recorded prefix. Step 0 and m_max are always
/// recorded.
ProcessTrace run_process(std::size_t n, std::size_t k, std::size_t m_max, SignPattern pattern,
                         std::uint64_t seed, std::uint64_t trial_id,
                         const ProcessOptions& options = {});

/// Same, over the edges of `order` in their stored order.
ProcessTrace run_process_on(const Hypergraph& order, SignPattern pattern,
                            const ProcessOptions& options = {});

struct BurstSummary {
  std::optional<std::size_t> first_step;
  std::optional<std::size_t> last_step;
  mpz_class max_torsion_order = 1;
  std::size_t torsion_steps = 0;

  bool empty() const { return !first_step.has_value(); }
};

BurstSummary detect_burst(const ProcessTrace& trace);

enum class ParamKind { p, m, c };

std::string_view to_string(ParamKind kind);

/// One sweep cell. For c, p = c * log(n) / n^(k-1).
struct SweepCell {
  std::size_t n = 0;
  std::size_t k = 0;
  ParamKind kind = ParamKind::m;
  mpq_class value;
  SignPattern pattern = SignPattern::alternating;
};

struct SweepRecord {
  SweepCell cell;
  std::size_t trials = 0;
  std::size_t torsion_final = 0;
  std::size_t torsion_ever = 0;
  std::size_t trivial = 0;   // coker = 0
  std::size_t coker_z = 0;   // coker = Z
  std::size_t free_rank_at_least_one = 0;
  double mean_free_rank = 0.0;
  std::optional<std::size_t> burst_min;
  std::optional<std::size_t> burst_max;
  std::vector<std::string> errors;  // one per failed trial
};

struct SweepOptions {
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::size_t parallelism = 1;
  /// Prefix resolution used for torsion_ever and the burst window; 0 records
  /// only the empty and the final prefix.
  std::size_t record_every = 0;
  ExactOptions exact;
};

std::vector<SweepRecord> sweep(const std::vector<SweepCell>& cells, const SweepOptions& options);

struct CurvePoint {
  std::size_t m = 0;
  std::size_t trials = 0;
  std::size_t with_torsion = 0;

  double fraction() const { return trials == 0 ? 0.0 : double(with_torsion) / double(trials); }
};

struct CurveOptions {
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::size_t parallelism = 1;
  SignPattern pattern = SignPattern::alternating;
  ExactOptions exact;
};

/// Fraction of trials whose m-column prefix has torsion, for each m in the
/// grid. Each trial samples one edge order of length max(grid).
std::vector<CurvePoint> torsion_probability_curve(std::size_t n, std::size_t k,
                                                  const std::vector<std::size_t>& m_grid,
                                                  const CurveOptions& options);

/// Maximum rational rank of an incidence matrix: n for odd k, n - 1 for even k.
std::size_t n_star(std::size_t n, std::size_t k);

/// p = c * log(n) / n^(k-1), evaluated in double and converted exactly.
mpq_class probability_from_c(std::size_t n, std::size_t k, const mpq_class& c);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Results must be
/// written to per-index slots; exceptions are rethrown after all workers join.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace torsionlab
