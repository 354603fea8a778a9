#ifndef EEGSEIZ_CLASSIFY_HPP
#define EEGSEIZ_CLASSIFY_HPP

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "eegseiz/types.hpp"

namespace eegseiz {

using FeatureVector = std::vector<double>;

// Dense symmetric matrix, row-major, with Cholesky-based solves.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(std::size_t dim, double diag = 0.0);

    std::size_t dim() const { return dim_; }
    double& at(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }

    double trace() const;
    void add_diagonal(double value);

    // L such that A = L L^T; throws ConditioningError if not positive definite.
    SymMatrix cholesky() const;
    // x^T A^{-1} x and log|A| via the factor.
    double quad_form_inv(const FeatureVector& x) const;
    double log_det() const;

private:
    std::size_t dim_ = 0;
    std::vector<double> data_;
};

enum class ClassifierMode { quadratic, pooled };

struct DiscriminantModel {
    FeatureVector mean_s, mean_ns;
    SymMatrix cov_s, cov_ns;
    double regularization_lambda = 1e-6;
    ClassifierMode mode = ClassifierMode::quadratic;
    double log_prior_offset = 0.0;
    std::size_t count_s = 0, count_ns = 0;

    std::size_t dim() const { return mean_s.size(); }
};

struct FitOptions {
    double shrinkage_lambda = 1e-6;
    ClassifierMode mode = ClassifierMode::quadratic;
    double log_prior_offset = 0.0;
};

// Sample means and (n-1)-divisor covariances per class, shrunk as
// Sigma += lambda * trace(Sigma)/k * I. Needs >= k+1 samples per class.
DiscriminantModel fit(const std::vector<std::pair<FeatureVector, EventClass>>& samples,
                      const FitOptions& opts = {});

// Log multivariate normal density.
double log_likelihood(const FeatureVector& x, const FeatureVector& mean,
                      const SymMatrix& cov);

// (x-mu_s)' Sigma_s^-1 (x-mu_s) + ln|Sigma_s|
//   - (x-mu_ns)' Sigma_ns^-1 (x-mu_ns) - ln|Sigma_ns|.
// Negative favors the seizure class.
double discriminant_score(const FeatureVector& x, const DiscriminantModel& model);

struct Prediction {
    EventClass label = EventClass::non_seizure;
    double score = 0.0;
};

// score < 0 -> seizure; ties resolve to non-seizure.
Prediction predict(const FeatureVector& x, const DiscriminantModel& model);

// Self-describing text serialization (key = value lines + matrix blocks).
void save_model(const DiscriminantModel& model, std::ostream& out);
DiscriminantModel load_model(std::istream& in);
void save_model_file(const DiscriminantModel& model, const std::string& path);
DiscriminantModel load_model_file(const std::string& path);

}  // namespace eegseiz

#endif
