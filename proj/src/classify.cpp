#include "eegseiz/classify.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace eegseiz {

SymMatrix::SymMatrix(std::size_t dim, double diag) : dim_(dim), data_(dim * dim, 0.0) {
    for (std::size_t i = 0; i < dim; ++i) at(i, i) = diag;
}

double SymMatrix::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += at(i, i);
    return t;
}

void SymMatrix::add_diagonal(double value) {
    for (std::size_t i = 0; i < dim_; ++i) at(i, i) += value;
}

SymMatrix SymMatrix::cholesky() const {
    SymMatrix L(dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
        double d = at(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= L.at(j, k) * L.at(j, k);
        if (!(d > 0.0))
            throw ConditioningError("covariance matrix is not positive definite");
        L.at(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < dim_; ++i) {
            double s = at(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= L.at(i, k) * L.at(j, k);
            L.at(i, j) = s / L.at(j, j);
        }
    }
    return L;
}

double SymMatrix::quad_form_inv(const FeatureVector& x) const {
    if (x.size() != dim_) throw DomainError("dimension mismatch in quadratic form");
    const SymMatrix L = cholesky();
    // Solve L y = x by forward substitution; quad form = ||y||^2.
    FeatureVector y(dim_);
    double q = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        double s = x[i];
        for (std::size_t k = 0; k < i; ++k) s -= L.at(i, k) * y[k];
        y[i] = s / L.at(i, i);
        q += y[i] * y[i];
    }
    return q;
}

double SymMatrix::log_det() const {
    const SymMatrix L = cholesky();
    double ld = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) ld += std::log(L.at(i, i));
    return 2.0 * ld;
}

namespace {

SymMatrix covariance_of(const std::vector<const FeatureVector*>& points,
                        const FeatureVector& mean) {
    const std::size_t k = mean.size();
    SymMatrix cov(k);
    for (const auto* p : points) {
        for (std::size_t r = 0; r < k; ++r)
            for (std::size_t c = 0; c < k; ++c)
                cov.at(r, c) += ((*p)[r] - mean[r]) * ((*p)[c] - mean[c]);
    }
    const double divisor = static_cast<double>(points.size()) - 1.0;
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < k; ++c) cov.at(r, c) /= divisor;
    return cov;
}

void shrink(SymMatrix& cov, double lambda) {
    cov.add_diagonal(lambda * cov.trace() / static_cast<double>(cov.dim()));
}

}  // namespace

DiscriminantModel fit(const std::vector<std::pair<FeatureVector, EventClass>>& samples,
                      const FitOptions& opts) {
    std::vector<const FeatureVector*> cls_s, cls_ns;
    for (const auto& [x, c] : samples)
        (c == EventClass::seizure ? cls_s : cls_ns).push_back(&x);
    if (cls_s.empty() || cls_ns.empty())
        throw DomainError("both classes must be present for training");

    const std::size_t k = samples.front().first.size();
    for (const auto& [x, c] : samples)
        if (x.size() != k) throw DomainError("inconsistent feature dimensions");
    if (cls_s.size() < k + 1 || cls_ns.size() < k + 1)
        throw DomainError("each class needs at least " + std::to_string(k + 1) +
                          " samples (seizure " + std::to_string(cls_s.size()) +
                          ", non_seizure " + std::to_string(cls_ns.size()) + ")");

    auto mean_of = [k](const std::vector<const FeatureVector*>& pts) {
        FeatureVector mu(k, 0.0);
        for (const auto* p : pts)
            for (std::size_t i = 0; i < k; ++i) mu[i] += (*p)[i];
        for (double& v : mu) v /= static_cast<double>(pts.size());
        return mu;
    };

    DiscriminantModel model;
    model.mean_s = mean_of(cls_s);
    model.mean_ns = mean_of(cls_ns);
    model.cov_s = covariance_of(cls_s, model.mean_s);
    model.cov_ns = covariance_of(cls_ns, model.mean_ns);
    model.regularization_lambda = opts.shrinkage_lambda;
    model.mode = opts.mode;
    model.log_prior_offset = opts.log_prior_offset;
    model.count_s = cls_s.size();
    model.count_ns = cls_ns.size();

    if (opts.mode == ClassifierMode::pooled) {
        const double ws = static_cast<double>(cls_s.size()) - 1.0;
        const double wns = static_cast<double>(cls_ns.size()) - 1.0;
        SymMatrix pooled(k);
        for (std::size_t r = 0; r < k; ++r)
            for (std::size_t c = 0; c < k; ++c)
                pooled.at(r, c) = (ws * model.cov_s.at(r, c) +
                                   wns * model.cov_ns.at(r, c)) /
                                  (ws + wns);
        model.cov_s = pooled;
        model.cov_ns = pooled;
    }
    shrink(model.cov_s, opts.shrinkage_lambda);
    shrink(model.cov_ns, opts.shrinkage_lambda);

    // Fail fast on singular covariance.
    (void)model.cov_s.cholesky();
    (void)model.cov_ns.cholesky();
    return model;
}

double log_likelihood(const FeatureVector& x, const FeatureVector& mean,
                      const SymMatrix& cov) {
    if (x.size() != mean.size() || mean.size() != cov.dim())
        throw DomainError("dimension mismatch in log_likelihood");
    FeatureVector diff(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) diff[i] = x[i] - mean[i];
    const double k = static_cast<double>(x.size());
    return -0.5 * (k * std::log(2.0 * std::numbers::pi) + cov.log_det() +
                   cov.quad_form_inv(diff));
}

double discriminant_score(const FeatureVector& x, const DiscriminantModel& model) {
    if (x.size() != model.dim()) throw DomainError("feature dimension mismatch");
    FeatureVector ds(x.size()), dns(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        ds[i] = x[i] - model.mean_s[i];
        dns[i] = x[i] - model.mean_ns[i];
    }
    return model.cov_s.quad_form_inv(ds) + model.cov_s.log_det() -
           model.cov_ns.quad_form_inv(dns) - model.cov_ns.log_det();
}

Prediction predict(const FeatureVector& x, const DiscriminantModel& model) {
    Prediction p;
    p.score = discriminant_score(x, model);
    p.label = p.score < 2.0 * model.log_prior_offset ? EventClass::seizure
                                                     : EventClass::non_seizure;
    return p;
}

namespace {

void write_matrix(std::ostream& out, const std::string& name, const SymMatrix& m) {
    out << name << " =\n";
    for (std::size_t r = 0; r < m.dim(); ++r) {
        for (std::size_t c = 0; c < m.dim(); ++c) {
            if (c) out << " ";
            out << m.at(r, c);
        }
        out << "\n";
    }
}

void write_vector(std::ostream& out, const std::string& name, const FeatureVector& v) {
    out << name << " =";
    for (double x : v) out << " " << x;
    out << "\n";
}

}  // namespace

void save_model(const DiscriminantModel& model, std::ostream& out) {
    out << std::setprecision(17);
    out << "format = eegseiz-discriminant-v1\n";
    out << "dim = " << model.dim() << "\n";
    out << "mode = " << (model.mode == ClassifierMode::pooled ? "pooled" : "eq6") << "\n";
    out << "shrinkage_lambda = " << model.regularization_lambda << "\n";
    out << "log_prior_offset = " << model.log_prior_offset << "\n";
    out << "count_seizure = " << model.count_s << "\n";
    out << "count_non_seizure = " << model.count_ns << "\n";
    write_vector(out, "mean_seizure", model.mean_s);
    write_vector(out, "mean_non_seizure", model.mean_ns);
    write_matrix(out, "cov_seizure", model.cov_s);
    write_matrix(out, "cov_non_seizure", model.cov_ns);
}

DiscriminantModel load_model(std::istream& in) {
    DiscriminantModel model;
    std::size_t dim = 0;
    std::string line;
    auto value_of = [](const std::string& l) {
        const auto pos = l.find('=');
        if (pos == std::string::npos) throw ParseError("model line missing '=': " + l);
        return l.substr(pos + 1);
    };
    auto read_matrix = [&in, &dim](SymMatrix& m) {
        m = SymMatrix(dim);
        std::string row;
        for (std::size_t r = 0; r < dim; ++r) {
            if (!std::getline(in, row)) throw ParseError("truncated matrix block");
            std::istringstream rs(row);
            for (std::size_t c = 0; c < dim; ++c)
                if (!(rs >> m.at(r, c))) throw ParseError("short matrix row");
        }
    };

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("format", 0) == 0) {
            if (value_of(line).find("eegseiz-discriminant-v1") == std::string::npos)
                throw ParseError("unknown model format");
        } else if (line.rfind("dim", 0) == 0) {
            dim = static_cast<std::size_t>(std::stoul(value_of(line)));
        } else if (line.rfind("mode", 0) == 0) {
            model.mode = value_of(line).find("pooled") != std::string::npos
                             ? ClassifierMode::pooled
                             : ClassifierMode::quadratic;
        } else if (line.rfind("shrinkage_lambda", 0) == 0) {
            model.regularization_lambda = std::stod(value_of(line));
        } else if (line.rfind("log_prior_offset", 0) == 0) {
            model.log_prior_offset = std::stod(value_of(line));
        } else if (line.rfind("count_seizure", 0) == 0) {
            model.count_s = std::stoul(value_of(line));
        } else if (line.rfind("count_non_seizure", 0) == 0) {
            model.count_ns = std::stoul(value_of(line));
        } else if (line.rfind("mean_seizure", 0) == 0 ||
                   line.rfind("mean_non_seizure", 0) == 0) {
            std::istringstream vs(value_of(line));
            FeatureVector v;
            double x;
            while (vs >> x) v.push_back(x);
            if (v.size() != dim) throw ParseError("mean vector has wrong dimension");
            (line.rfind("mean_seizure", 0) == 0 ? model.mean_s : model.mean_ns) =
                std::move(v);
        } else if (line.rfind("cov_seizure", 0) == 0) {
            read_matrix(model.cov_s);
        } else if (line.rfind("cov_non_seizure", 0) == 0) {
            read_matrix(model.cov_ns);
        }
    }
    if (model.mean_s.size() != dim || model.cov_s.dim() != dim ||
        model.mean_ns.size() != dim || model.cov_ns.dim() != dim)
        throw ParseError("incomplete model file");
    return model;
}

void save_model_file(const DiscriminantModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    save_model(model, out);
}

DiscriminantModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open model file");
    return load_model(in);
}

}  // namespace eegseiz
