#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "monitor/core/events.hpp"
#include "monitor/core/reference.hpp"
#include "monitor/drift/projection.hpp"
#include "monitor/model/client.hpp"
#include "monitor/stats/frequency.hpp"
#include "monitor/util/matrix.hpp"

namespace monitor::drift {

using json = nlohmann::json;

// Covariate tests run on input records, label tests on model output vectors.
enum class DriftKind { Covariate, Label };

enum class DriftMethod { KsFeaturewise, Mmd };
enum class Correction { Bonferroni, FdrBh };
enum class PreprocessorKind { Identity, RandomProjection, Bbsd };

struct DriftConfig {
  DriftMethod method = DriftMethod::KsFeaturewise;
  PreprocessorKind preprocessor = PreprocessorKind::Identity;
  std::size_t projection_dim = 32;
  Correction correction = Correction::Bonferroni;
  double alpha = 0.05;
  std::size_t min_batch = 100;
  std::size_t n_permutations = 100;
  std::uint64_t seed = 0;
  std::size_t reference_cap = 2000;
  // Fixed RBF bandwidth override; median heuristic when unset.
  std::optional<double> bandwidth;
};

// One feature-wise test outcome (KS for numerical, chi-square for
// categorical), with the correction-adjusted decision.
struct FeatureTest {
  std::string name;
  std::string test;  // "ks" | "chi2"
  double statistic = 0.0;
  double pvalue = 1.0;
  bool reject = false;
};

struct DriftReport {
  DriftKind kind = DriftKind::Covariate;
  DriftMethod method = DriftMethod::KsFeaturewise;
  Correction correction = Correction::Bonferroni;
  double alpha = 0.05;
  bool drift_detected = false;
  std::size_t n = 0;  // reference sample size used
  std::size_t m = 0;  // batch sample size
  std::uint64_t window = 0;
  TimestampMs timestamp = 0;
  std::vector<FeatureTest> features;  // KS path
  double mmd2 = 0.0;                  // MMD path
  double pvalue = 1.0;
  double sigma2 = 0.0;

  json to_json() const;
};

// Maps each record to the model's full output probability vector. The
// black-box dimensionality reduction, and the sample label-shift tests run
// on.
util::Matrix reduce_bbsd(const std::vector<Record>& records, model::ModelClient& client);

// Two-sample drift testing of live batches against a fixed reference.
// Construction precomputes everything derivable from the reference alone
// (feature columns, encoded matrix, the projection map, the MMD subsample),
// so batch tests are pure functions of (batch, batch_index).
class DriftDetector {
 public:
  DriftDetector(ReferenceSet reference, DriftConfig config,
                model::ModelClient* bbsd_client = nullptr);

  // Covariate-shift test of a record batch. `batch_index` feeds the
  // permutation seed so successive batches draw distinct but reproducible
  // permutations.
  DriftReport test_batch(const std::vector<Record>& batch, std::uint64_t batch_index = 0,
                         TimestampMs timestamp = 0) const;

  // Label-shift test of a batch of model output vectors against the
  // reference outputs (stored in the reference set, or computed through the
  // BBSD client once at construction).
  DriftReport test_label_batch(const std::vector<std::vector<double>>& outputs,
                               std::uint64_t batch_index = 0, TimestampMs timestamp = 0) const;

  const DriftConfig& config() const { return config_; }
  const ReferenceSet& reference() const { return reference_; }

 private:
  DriftReport test_matrices(const util::Matrix& ref, const util::Matrix& batch,
                            const std::vector<std::string>& column_names, DriftKind kind,
                            std::uint64_t batch_index, TimestampMs timestamp) const;
  DriftReport ks_battery_raw(const std::vector<Record>& batch, TimestampMs timestamp) const;
  util::Matrix preprocess(const util::Matrix& input) const;

  ReferenceSet reference_;
  DriftConfig config_;
  model::ModelClient* bbsd_client_ = nullptr;

  // Reference-derived caches, fixed at construction.
  std::vector<std::vector<double>> ref_columns_;     // numerical feature columns
  std::vector<stats::FrequencyTable> ref_freq_;      // categorical feature counts
  util::Matrix ref_pre_;                             // preprocessed encoded records
  std::vector<std::string> pre_names_;               // column names of ref_pre_
  std::optional<RandomProjection> projection_;
  util::Matrix ref_outputs_;                         // label-path reference sample
};

std::string to_string(DriftKind kind);
std::string to_string(DriftMethod method);
std::string to_string(Correction correction);
DriftKind drift_kind_from_string(const std::string& s);
DriftMethod drift_method_from_string(const std::string& s);
Correction correction_from_string(const std::string& s);
PreprocessorKind preprocessor_from_string(const std::string& s);

}  // namespace monitor::drift
