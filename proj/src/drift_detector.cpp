#include "monitor/drift/detector.hpp"

#include <algorithm>
#include <numeric>

#include "monitor/drift/chi2.hpp"
#include "monitor/drift/correction.hpp"
#include "monitor/drift/encode.hpp"
#include "monitor/drift/ks.hpp"
#include "monitor/drift/mmd.hpp"
#include "monitor/drift/permutation.hpp"
#include "monitor/util/rng.hpp"

namespace monitor::drift {

namespace {

constexpr std::uint64_t kSubsampleStream = 0xCA9;
constexpr std::uint64_t kProjectionStream = 0x940;

std::vector<double> column_of(const std::vector<Record>& records, std::size_t feature) {
  std::vector<double> col;
  col.reserve(records.size());
  for (const auto& r : records) col.push_back(as_number(r.values[feature]));
  return col;
}

// Uniform seeded subsample of rows, order-preserving, when over the cap.
util::Matrix cap_rows(const util::Matrix& m, std::size_t cap, std::uint64_t seed) {
  if (cap == 0 || m.rows() <= cap) return m;
  std::vector<std::size_t> idx(m.rows());
  std::iota(idx.begin(), idx.end(), 0);
  util::Rng rng(seed);
  rng.shuffle(idx);
  idx.resize(cap);
  std::sort(idx.begin(), idx.end());
  util::Matrix out(cap, m.cols());
  for (std::size_t i = 0; i < cap; ++i)
    std::copy(m.row(idx[i]).begin(), m.row(idx[i]).end(), out.row(i).begin());
  return out;
}

util::Matrix outputs_to_matrix(const std::vector<std::vector<double>>& outputs) {
  if (outputs.empty()) throw Error("EmptySample", "no output vectors");
  util::Matrix m(outputs.size(), outputs.front().size());
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    if (outputs[i].size() != m.cols())
      throw Error("DimensionMismatch", "ragged output vectors");
    std::copy(outputs[i].begin(), outputs[i].end(), m.row(i).begin());
  }
  return m;
}

std::vector<bool> apply_correction(const std::vector<double>& pvalues, Correction c,
                                   double alpha) {
  return c == Correction::Bonferroni ? correct_bonferroni(pvalues, alpha)
                                     : correct_fdr_bh(pvalues, alpha);
}

}  // namespace

util::Matrix reduce_bbsd(const std::vector<Record>& records, model::ModelClient& client) {
  auto outputs = client.predict(records);
  if (outputs.size() != records.size())
    throw Error("ModelUnavailable", "model returned " + std::to_string(outputs.size()) +
                                        " outputs for " + std::to_string(records.size()) +
                                        " records");
  return outputs_to_matrix(outputs);
}

DriftDetector::DriftDetector(ReferenceSet reference, DriftConfig config,
                             model::ModelClient* bbsd_client)
    : reference_(std::move(reference)), config_(config), bbsd_client_(bbsd_client) {
  if (reference_.records.empty()) throw Error("EmptySample", "reference set is empty");
  const auto& schema = reference_.schema;
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (schema.at(i).kind == FeatureKind::Numerical) {
      ref_columns_.push_back(column_of(reference_.records, i));
    } else {
      stats::FrequencyTable t(schema.at(i).categories);
      for (const auto& r : reference_.records) t.update(as_token(r.values[i]));
      ref_freq_.push_back(std::move(t));
    }
  }

  util::Matrix encoded = encode_records(reference_.records, schema);
  switch (config_.preprocessor) {
    case PreprocessorKind::Identity: {
      ref_pre_ = std::move(encoded);
      std::size_t j = 0;
      for (const auto& f : schema.features()) {
        if (f.kind == FeatureKind::Numerical) {
          pre_names_.push_back(f.name);
          ++j;
        } else {
          for (const auto& c : f.categories) pre_names_.push_back(f.name + "=" + c);
        }
      }
      break;
    }
    case PreprocessorKind::RandomProjection: {
      projection_.emplace(encoded.cols(), std::min(config_.projection_dim, encoded.cols()),
                          util::derive_seed(config_.seed, kProjectionStream));
      ref_pre_ = projection_->apply(encoded);
      for (std::size_t k = 0; k < ref_pre_.cols(); ++k)
        pre_names_.push_back("proj_" + std::to_string(k));
      break;
    }
    case PreprocessorKind::Bbsd: {
      if (!reference_.model_outputs.empty()) {
        ref_pre_ = outputs_to_matrix(reference_.model_outputs);
      } else {
        if (!bbsd_client_)
          throw Error("PreprocessorError",
                      "BBSD preprocessor needs reference outputs or a model client");
        try {
          ref_pre_ = reduce_bbsd(reference_.records, *bbsd_client_);
        } catch (const Error& e) {
          throw Error("PreprocessorError", e.what());
        }
      }
      for (std::size_t k = 0; k < ref_pre_.cols(); ++k)
        pre_names_.push_back("output_" + std::to_string(k));
      break;
    }
  }

  // Label-path reference sample: stored outputs, or the BBSD reduction
  // already computed above.
  if (!reference_.model_outputs.empty())
    ref_outputs_ = outputs_to_matrix(reference_.model_outputs);
  else if (config_.preprocessor == PreprocessorKind::Bbsd)
    ref_outputs_ = ref_pre_;
}

DriftReport DriftDetector::test_batch(const std::vector<Record>& batch,
                                      std::uint64_t batch_index, TimestampMs timestamp) const {
  if (batch.size() < config_.min_batch)
    throw Error("InsufficientBatch", "batch of " + std::to_string(batch.size()) +
                                         " below min_batch " +
                                         std::to_string(config_.min_batch));
  if (config_.method == DriftMethod::KsFeaturewise &&
      config_.preprocessor == PreprocessorKind::Identity)
    return ks_battery_raw(batch, timestamp);

  util::Matrix batch_matrix;
  if (config_.preprocessor == PreprocessorKind::Bbsd) {
    if (!bbsd_client_) throw Error("PreprocessorError", "BBSD preprocessor needs a model client");
    try {
      batch_matrix = reduce_bbsd(batch, *bbsd_client_);
    } catch (const Error& e) {
      throw Error("PreprocessorError", e.what());
    }
  } else {
    batch_matrix = preprocess(encode_records(batch, reference_.schema));
  }
  return test_matrices(ref_pre_, batch_matrix, pre_names_, DriftKind::Covariate, batch_index,
                       timestamp);
}

DriftReport DriftDetector::test_label_batch(const std::vector<std::vector<double>>& outputs,
                                            std::uint64_t batch_index,
                                            TimestampMs timestamp) const {
  if (outputs.size() < config_.min_batch)
    throw Error("InsufficientBatch", "batch of " + std::to_string(outputs.size()) +
                                         " below min_batch " +
                                         std::to_string(config_.min_batch));
  if (ref_outputs_.rows() == 0)
    throw Error("PreprocessorError",
                "label-shift testing needs reference model outputs (store them in the "
                "reference set or configure the BBSD preprocessor)");
  util::Matrix batch_matrix = outputs_to_matrix(outputs);
  if (batch_matrix.cols() != ref_outputs_.cols())
    throw Error("DimensionMismatch", "output dimensionality differs from reference");
  std::vector<std::string> names;
  for (std::size_t k = 0; k < ref_outputs_.cols(); ++k)
    names.push_back("output_" + std::to_string(k));
  return test_matrices(ref_outputs_, batch_matrix, names, DriftKind::Label, batch_index,
                       timestamp);
}

util::Matrix DriftDetector::preprocess(const util::Matrix& input) const {
  if (projection_) return projection_->apply(input);
  return input;
}

DriftReport DriftDetector::ks_battery_raw(const std::vector<Record>& batch,
                                          TimestampMs timestamp) const {
  const auto& schema = reference_.schema;
  DriftReport report;
  report.kind = DriftKind::Covariate;
  report.method = DriftMethod::KsFeaturewise;
  report.correction = config_.correction;
  report.alpha = config_.alpha;
  report.n = reference_.size();
  report.m = batch.size();
  report.timestamp = timestamp;

  std::size_t num_idx = 0, cat_idx = 0;
  std::vector<double> pvalues;
  for (std::size_t i = 0; i < schema.size(); ++i) {
    FeatureTest ft;
    ft.name = schema.at(i).name;
    if (schema.at(i).kind == FeatureKind::Numerical) {
      auto col = column_of(batch, i);
      ft.test = "ks";
      ft.statistic = ks_statistic(ref_columns_[num_idx], col);
      ft.pvalue = ks_pvalue(ft.statistic, ref_columns_[num_idx].size(), col.size());
      ++num_idx;
    } else {
      stats::FrequencyTable t(schema.at(i).categories);
      for (const auto& r : batch) t.update(as_token(r.values[i]));
      ft.test = "chi2";
      auto [stat, p] = chi2_two_sample(ref_freq_[cat_idx], t);
      ft.statistic = stat;
      ft.pvalue = p;
      ++cat_idx;
    }
    pvalues.push_back(ft.pvalue);
    report.features.push_back(std::move(ft));
  }
  auto reject = apply_correction(pvalues, config_.correction, config_.alpha);
  for (std::size_t i = 0; i < reject.size(); ++i) {
    report.features[i].reject = reject[i];
    if (reject[i]) report.drift_detected = true;
  }
  return report;
}

DriftReport DriftDetector::test_matrices(const util::Matrix& ref, const util::Matrix& batch,
                                         const std::vector<std::string>& column_names,
                                         DriftKind kind, std::uint64_t batch_index,
                                         TimestampMs timestamp) const {
  DriftReport report;
  report.kind = kind;
  report.method = config_.method;
  report.correction = config_.correction;
  report.alpha = config_.alpha;
  report.m = batch.rows();
  report.timestamp = timestamp;

  if (config_.method == DriftMethod::KsFeaturewise) {
    report.n = ref.rows();
    std::vector<double> pvalues;
    std::vector<double> ref_col(ref.rows()), batch_col(batch.rows());
    for (std::size_t c = 0; c < ref.cols(); ++c) {
      for (std::size_t r = 0; r < ref.rows(); ++r) ref_col[r] = ref.at(r, c);
      for (std::size_t r = 0; r < batch.rows(); ++r) batch_col[r] = batch.at(r, c);
      FeatureTest ft;
      ft.name = column_names[c];
      ft.test = "ks";
      ft.statistic = ks_statistic(ref_col, batch_col);
      ft.pvalue = ks_pvalue(ft.statistic, ref_col.size(), batch_col.size());
      pvalues.push_back(ft.pvalue);
      report.features.push_back(std::move(ft));
    }
    auto reject = apply_correction(pvalues, config_.correction, config_.alpha);
    for (std::size_t i = 0; i < reject.size(); ++i) {
      report.features[i].reject = reject[i];
      if (reject[i]) report.drift_detected = true;
    }
    return report;
  }

  // MMD path: cap the reference for the quadratic kernel cost, pick the
  // bandwidth on the pooled sample, then a permutation test.
  util::Matrix capped = cap_rows(ref, config_.reference_cap,
                                 util::derive_seed(config_.seed, kSubsampleStream));
  report.n = capped.rows();
  util::Matrix pooled(capped.rows() + batch.rows(), capped.cols());
  for (std::size_t i = 0; i < capped.rows(); ++i)
    std::copy(capped.row(i).begin(), capped.row(i).end(), pooled.row(i).begin());
  for (std::size_t i = 0; i < batch.rows(); ++i)
    std::copy(batch.row(i).begin(), batch.row(i).end(),
              pooled.row(capped.rows() + i).begin());
  double sigma2;
  if (config_.bandwidth) {
    sigma2 = *config_.bandwidth;
  } else {
    try {
      sigma2 = median_heuristic(pooled);
    } catch (const Error&) {
      sigma2 = 1.0;  // degenerate pooled sample: MMD is 0 under any bandwidth
    }
  }
  auto result = mmd_permutation_test(capped, batch, sigma2, config_.n_permutations,
                                     util::derive_seed(config_.seed, batch_index));
  report.mmd2 = result.mmd2;
  report.pvalue = result.pvalue;
  report.sigma2 = result.sigma2;
  report.drift_detected = result.pvalue <= config_.alpha;
  return report;
}

json DriftReport::to_json() const {
  json j{{"kind", to_string(kind)},
         {"method", to_string(method)},
         {"correction", to_string(correction)},
         {"alpha", alpha},
         {"drift_detected", drift_detected},
         {"n", n},
         {"m", m},
         {"window", window},
         {"timestamp", timestamp}};
  if (method == DriftMethod::KsFeaturewise) {
    json fs = json::array();
    for (const auto& f : features)
      fs.push_back(json{{"name", f.name},
                        {"test", f.test},
                        {"statistic", f.statistic},
                        {"pvalue", f.pvalue},
                        {"reject", f.reject}});
    j["features"] = fs;
  } else {
    j["mmd2"] = mmd2;
    j["pvalue"] = pvalue;
    j["sigma2"] = sigma2;
  }
  return j;
}

std::string to_string(DriftKind kind) {
  return kind == DriftKind::Covariate ? "covariate" : "label";
}
std::string to_string(DriftMethod method) {
  return method == DriftMethod::KsFeaturewise ? "ks_featurewise" : "mmd";
}
std::string to_string(Correction correction) {
  return correction == Correction::Bonferroni ? "bonferroni" : "fdr_bh";
}

DriftKind drift_kind_from_string(const std::string& s) {
  if (s == "covariate") return DriftKind::Covariate;
  if (s == "label") return DriftKind::Label;
  throw Error("BadConfig", "unknown drift kind '" + s + "'");
}
DriftMethod drift_method_from_string(const std::string& s) {
  if (s == "ks_featurewise" || s == "ks") return DriftMethod::KsFeaturewise;
  if (s == "mmd") return DriftMethod::Mmd;
  throw Error("BadConfig", "unknown drift method '" + s + "'");
}
Correction correction_from_string(const std::string& s) {
  if (s == "bonferroni") return Correction::Bonferroni;
  if (s == "fdr_bh" || s == "bh") return Correction::FdrBh;
  throw Error("BadConfig", "unknown correction '" + s + "'");
}
PreprocessorKind preprocessor_from_string(const std::string& s) {
  if (s == "identity") return PreprocessorKind::Identity;
  if (s == "random_projection") return PreprocessorKind::RandomProjection;
  if (s == "bbsd") return PreprocessorKind::Bbsd;
  throw Error("BadConfig", "unknown preprocessor '" + s + "'");
}

}  // namespace monitor::drift
