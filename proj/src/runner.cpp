#include "topicbridge/runner.hpp"

#include <chrono>
#include <stdexcept>

#include "topicbridge/log.hpp"

namespace topicbridge {

std::string to_string(MethodKind method) {
  switch (method) {
    case MethodKind::JointONMF: return "JointONMF";
    case MethodKind::ONMF: return "ONMF";
    case MethodKind::SNMF: return "SNMF";
  }
  throw std::logic_error("unreachable");
}

MethodKind parse_method(std::string_view name) {
  if (name == "JointONMF") return MethodKind::JointONMF;
  if (name == "ONMF") return MethodKind::ONMF;
  if (name == "SNMF") return MethodKind::SNMF;
  throw std::invalid_argument("unknown method: " + std::string(name));
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<TopicEntry> report_rows(const Matrix& rows,
                                    const Vocabulary& vocab, int count) {
  const int n = std::min(count, vocab.size());
  std::vector<TopicEntry> out;
  for (Eigen::Index i = 0; i < rows.rows(); ++i)
    out.push_back({top_terms(rows.row(i).transpose(), vocab.terms, n)});
  return out;
}

Matrix gather_rows(const Matrix& M, const std::vector<int>& idx) {
  Matrix out(static_cast<Eigen::Index>(idx.size()), M.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(i) = M.row(idx[i]);
  return out;
}

// Baseline metrics: previous vs. new topics compared through the optimal
// common-topic assignment (baselines have no built-in split).
void baseline_metrics(const Matrix& H_prev, const Matrix& H_new, int k_c,
                      MetricRecord& rec, TopicReport& report,
                      Matrix& common_out, const Vocabulary& vocab,
                      int top_count) {
  const int kc = std::min<int>(
      k_c, std::min<int>(static_cast<int>(H_prev.rows()),
                         static_cast<int>(H_new.rows())));
  TopicAssignment assignment = assign_common_topics(H_prev, H_new, kc);

  Matrix prev_common(kc, H_prev.cols());
  Matrix new_common(kc, H_new.cols());
  for (int i = 0; i < kc; ++i) {
    prev_common.row(i) = H_prev.row(assignment.pairs[i].first);
    new_common.row(i) = H_new.row(assignment.pairs[i].second);
  }
  rec.cscore = cscore(prev_common, new_common);

  const int kd = std::min<int>(
      static_cast<int>(assignment.distinct_prev.size()),
      static_cast<int>(assignment.distinct_new.size()));
  if (kd > 0) {
    std::vector<int> prev_idx(assignment.distinct_prev.begin(),
                              assignment.distinct_prev.begin() + kd);
    std::vector<int> new_idx(assignment.distinct_new.begin(),
                             assignment.distinct_new.begin() + kd);
    rec.dscore = dscore(gather_rows(H_prev, prev_idx),
                        gather_rows(H_new, new_idx));
    report.distinct_prior =
        report_rows(gather_rows(H_prev, prev_idx), vocab, top_count);
    report.distinct_new =
        report_rows(gather_rows(H_new, new_idx), vocab, top_count);
  }
  report.common = report_rows(new_common, vocab, top_count);
  common_out = std::move(new_common);
}

}  // namespace

TimeSeriesResult run_stream(const StreamSchedule& schedule, MethodKind method,
                            const JointParams& params,
                            const Vocabulary& vocab, int top_terms_count) {
  if (schedule.steps.empty())
    throw std::invalid_argument("run_stream: empty schedule");
  if (params.k_c < 1 || params.k_d < 1)
    throw std::invalid_argument("run_stream: k_c and k_d must be >= 1");

  TimeSeriesResult result;
  result.method = method;
  result.params = params;

  const int k = params.k();
  Matrix H_t;              // carried topics, k x n once initialized
  FactorPair onmf_state;   // ONMF: compressed running factorization
  Matrix snmf_data;        // SNMF: everything seen so far
  bool initialized = false;

  for (const StreamStep& step : schedule.steps) {
    if (step.empty) {
      log::warn("step " + std::to_string(step.time_index) +
                ": empty batch, skipping");
      continue;
    }
    Matrix U = tfidf_matrix(step.batch, vocab);

    if (!initialized) {
      const Eigen::Index k0 =
          std::min<Eigen::Index>(k, std::min(U.rows(), U.cols()));
      if (k0 < k)
        log::warn("step " + std::to_string(step.time_index) +
                  ": initial batch supports only k=" + std::to_string(k0));
      FactorPair f = nmf_factorize(U, k0, params.solver);
      H_t = f.H;
      onmf_state = f;
      snmf_data = U;
      initialized = true;
      continue;
    }

    MetricRecord rec;
    rec.time_index = step.time_index;
    rec.method = method;
    TopicReport report;
    report.time_index = step.time_index;
    Matrix step_common;

    const int k_step =
        std::min<int>(k, static_cast<int>(std::min(U.rows(), U.cols())));
    if (k_step < k) {
      rec.warning = "batch supports only k=" + std::to_string(k_step);
      log::warn("step " + std::to_string(step.time_index) + ": " +
                rec.warning);
    }

    switch (method) {
      case MethodKind::JointONMF: {
        JointParams p = params;
        if (k_step < p.k()) {
          if (k_step < 2) {
            rec.warning += "; skipped (needs k >= 2)";
            log::warn("step " + std::to_string(step.time_index) +
                      ": batch too small for joint step, skipping");
            continue;
          }
          p.k_c = std::min(p.k_c, k_step - 1);
          p.k_d = k_step - p.k_c;
        }
        const Matrix H_in = H_t.topRows(p.k());
        const auto start = Clock::now();
        JointFactorization J = joint_onmf_step(H_in, U, p);
        rec.wall_clock_s = seconds_since(start);
        rec.input_rows = U.rows();
        rec.cscore = cscore(J.H_star.topRows(p.k_c), J.H_U.topRows(p.k_c));
        rec.dscore =
            dscore(J.H_star.bottomRows(p.k_d), J.H_U.bottomRows(p.k_d));
        rec.re = reconstruction_error(U, {J.W_U, J.H_U});
        report.common = report_rows(J.H_U.topRows(p.k_c), vocab,
                                    top_terms_count);
        report.distinct_prior = report_rows(J.H_star.bottomRows(p.k_d),
                                            vocab, top_terms_count);
        report.distinct_new = report_rows(J.H_U.bottomRows(p.k_d), vocab,
                                          top_terms_count);
        step_common = J.H_U.topRows(p.k_c);
        // Carry the new data's topics forward; keep k rows if degraded.
        if (J.H_U.rows() == H_t.rows()) {
          H_t = J.H_U;
        } else {
          H_t.topRows(J.H_U.rows()) = J.H_U;
        }
        break;
      }
      case MethodKind::ONMF: {
        const Matrix H_prev = H_t;
        const auto start = Clock::now();
        FactorPair f = onmf_update(onmf_state, U, params.solver);
        rec.wall_clock_s = seconds_since(start);
        rec.input_rows = U.rows();
        rec.re = reconstruction_error(
            U, {Matrix(f.W.bottomRows(U.rows())), f.H});
        baseline_metrics(H_prev, f.H, params.k_c, rec, report, step_common,
                         vocab, top_terms_count);
        onmf_state = std::move(f);
        H_t = onmf_state.H;
        break;
      }
      case MethodKind::SNMF: {
        const Matrix H_prev = H_t;
        Matrix stacked(snmf_data.rows() + U.rows(), U.cols());
        stacked.topRows(snmf_data.rows()) = snmf_data;
        stacked.bottomRows(U.rows()) = U;
        snmf_data = std::move(stacked);
        const Eigen::Index k_sn = std::min<Eigen::Index>(
            k, std::min(snmf_data.rows(), snmf_data.cols()));
        const auto start = Clock::now();
        FactorPair f = nmf_factorize(snmf_data, k_sn, params.solver);
        rec.wall_clock_s = seconds_since(start);
        rec.input_rows = snmf_data.rows();
        rec.re = reconstruction_error(
            U, {Matrix(f.W.bottomRows(U.rows())), f.H});
        baseline_metrics(H_prev, f.H, params.k_c, rec, report, step_common,
                         vocab, top_terms_count);
        H_t = f.H;
        break;
      }
    }

    result.records.push_back(std::move(rec));
    result.reports.push_back(std::move(report));
    result.common_topics.push_back(std::move(step_common));
  }
  return result;
}

MethodComparison compare_methods(const StreamSchedule& schedule,
                                 const std::vector<MethodKind>& methods,
                                 const JointParams& params,
                                 const Vocabulary& vocab,
                                 int top_terms_count) {
  if (methods.empty())
    throw std::invalid_argument("compare_methods: no methods given");

  MethodComparison comparison;
  for (MethodKind method : methods) {
    TimeSeriesResult result =
        run_stream(schedule, method, params, vocab, top_terms_count);
    MethodAggregate agg;
    agg.method = method;
    if (!result.records.empty()) {
      for (const MetricRecord& rec : result.records) {
        agg.mean_cscore += rec.cscore;
        agg.mean_dscore += rec.dscore;
        agg.mean_re += rec.re;
        agg.mean_wall_clock_s += rec.wall_clock_s;
      }
      const double n = static_cast<double>(result.records.size());
      agg.mean_cscore /= n;
      agg.mean_dscore /= n;
      agg.mean_re /= n;
      agg.mean_wall_clock_s /= n;
    }
    comparison.aggregates.push_back(agg);
    comparison.results.push_back(std::move(result));
  }
  return comparison;
}

}  // namespace topicbridge
