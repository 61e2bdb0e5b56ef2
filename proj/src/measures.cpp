#include "mfgeq/measures.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "mfgeq/csv.hpp"
#include "mfgeq/errors.hpp"

namespace mfgeq {

namespace {

void require_finite(const std::vector<double>& samples) {
    if (samples.empty()) throw std::invalid_argument("empirical measure needs at least one sample");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!std::isfinite(samples[i])) {
            throw std::invalid_argument("empirical measure sample " + std::to_string(i) + " is not finite");
        }
    }
}

void require_same_size(const EmpiricalMeasure& a, const EmpiricalMeasure& b, const char* op) {
    if (a.size() != b.size()) {
        throw MismatchError(std::string(op) + ": sample counts differ (" + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()) + "); resample to a common N first");
    }
}

}  // namespace

EmpiricalMeasure::EmpiricalMeasure(std::vector<double> samples) : samples_(std::move(samples)) {
    require_finite(samples_);
    std::stable_sort(samples_.begin(), samples_.end());
}

EmpiricalMeasure::EmpiricalMeasure(Sorted, std::vector<double> samples) : samples_(std::move(samples)) {}

EmpiricalMeasure EmpiricalMeasure::from_sorted(std::vector<double> samples) {
    require_finite(samples);
    if (!std::is_sorted(samples.begin(), samples.end())) {
        throw std::invalid_argument("from_sorted: samples are not ascending");
    }
    return EmpiricalMeasure(Sorted{}, std::move(samples));
}

MeasureFlow::MeasureFlow(double t0, double dt, std::vector<EmpiricalMeasure> slices)
    : t0_(t0), dt_(dt), slices_(std::move(slices)) {
    if (slices_.size() < 2) throw std::invalid_argument("measure flow needs at least two grid times");
    if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw std::invalid_argument("measure flow time step must be positive");
    const auto n = slices_.front().size();
    for (const auto& s : slices_) {
        if (s.size() != n) throw MismatchError("measure flow slices must share one sample count");
    }
}

double mean(const EmpiricalMeasure& mu) {
    const auto s = mu.samples();
    return std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
}

double wasserstein2(const EmpiricalMeasure& mu1, const EmpiricalMeasure& mu2) {
    require_same_size(mu1, mu2, "wasserstein2");
    double acc = 0.0;
    for (std::size_t i = 0; i < mu1.size(); ++i) {
        const double d = mu1[i] - mu2[i];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(mu1.size()));
}

bool dominates(const EmpiricalMeasure& mu1, const EmpiricalMeasure& mu2) {
    require_same_size(mu1, mu2, "dominates");
    for (std::size_t i = 0; i < mu1.size(); ++i) {
        if (mu1[i] > mu2[i]) return false;
    }
    return true;
}

void require_same_grid(const MeasureFlow& nu1, const MeasureFlow& nu2) {
    if (nu1.steps() != nu2.steps() || nu1.sample_count() != nu2.sample_count() || nu1.t0() != nu2.t0() ||
        nu1.dt() != nu2.dt()) {
        std::ostringstream msg;
        msg << "measure flows live on different grids (t0 " << nu1.t0() << " vs " << nu2.t0() << ", dt " << nu1.dt()
            << " vs " << nu2.dt() << ", M " << nu1.steps() << " vs " << nu2.steps() << ", N " << nu1.sample_count()
            << " vs " << nu2.sample_count() << ")";
        throw MismatchError(msg.str());
    }
}

bool flow_dominates(const MeasureFlow& nu1, const MeasureFlow& nu2) {
    require_same_grid(nu1, nu2);
    for (std::size_t k = 0; k <= nu1.steps(); ++k) {
        if (!dominates(nu1.at(k), nu2.at(k))) return false;
    }
    return true;
}

double sup_wasserstein2(const MeasureFlow& nu1, const MeasureFlow& nu2) {
    require_same_grid(nu1, nu2);
    double worst = 0.0;
    for (std::size_t k = 0; k <= nu1.steps(); ++k) worst = std::max(worst, wasserstein2(nu1.at(k), nu2.at(k)));
    return worst;
}

EmpiricalMeasure resample(const EmpiricalMeasure& mu, std::size_t n) {
    if (n == 0) throw std::invalid_argument("resample: n must be positive");
    const auto src = mu.samples();
    const double big_n = static_cast<double>(src.size());
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        // Empirical quantile Q(u) = x_(ceil(u N) - 1).
        const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        auto idx = static_cast<std::size_t>(std::ceil(u * big_n));
        idx = std::clamp<std::size_t>(idx, 1, src.size()) - 1;
        out[i] = src[idx];
    }
    return EmpiricalMeasure::from_sorted(std::move(out));
}

EmpiricalMeasure shifted(const EmpiricalMeasure& mu, double offset) {
    std::vector<double> out(mu.samples().begin(), mu.samples().end());
    for (auto& x : out) x += offset;
    return EmpiricalMeasure(std::move(out));
}

EmpiricalMeasure gaussian_quantiles(double mean, double stddev, std::size_t n) {
    if (n == 0) throw std::invalid_argument("gaussian_quantiles: n must be positive");
    if (!(stddev >= 0.0)) throw std::invalid_argument("gaussian_quantiles: stddev must be nonnegative");
    std::vector<double> out(n, mean);
    if (stddev > 0.0) {
        const boost::math::normal_distribution<double> unit;
        // Fill the lower half and mirror, so the sample mean is exactly `mean`
        // up to summation rounding.
        for (std::size_t i = 0; i < n / 2; ++i) {
            const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
            const double z = boost::math::quantile(unit, u);
            out[i] = mean + stddev * z;
            out[n - 1 - i] = mean - stddev * z;
        }
    }
    return EmpiricalMeasure(std::move(out));
}

MeasureFlow constant_flow(const EmpiricalMeasure& mu, double t0, double dt, std::size_t steps) {
    return MeasureFlow(t0, dt, std::vector<EmpiricalMeasure>(steps + 1, mu));
}

void write_measure_csv(std::ostream& os, const EmpiricalMeasure& mu) {
    os << "value\n";
    for (double x : mu.samples()) os << csv::format(x) << '\n';
}

EmpiricalMeasure read_measure_csv(std::istream& is) {
    std::string line;
    std::vector<double> values;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (lineno == 1 && line == "value") continue;
        try {
            std::size_t used = 0;
            values.push_back(std::stod(line, &used));
            if (used != line.size() && line.find_first_not_of(" \t\r", used) != std::string::npos) {
                throw std::invalid_argument("trailing characters");
            }
        } catch (const std::exception&) {
            throw IoError("measure csv line " + std::to_string(lineno) + ": cannot parse '" + line + "'");
        }
    }
    return EmpiricalMeasure(std::move(values));
}

void write_flow_csv(std::ostream& os, const MeasureFlow& nu) {
    os << "time_index,time,sample_index,value\n";
    for (std::size_t k = 0; k <= nu.steps(); ++k) {
        const std::string t = csv::format(nu.time(k));
        const auto& slice = nu.at(k);
        for (std::size_t i = 0; i < slice.size(); ++i) {
            os << k << ',' << t << ',' << i << ',' << csv::format(slice[i]) << '\n';
        }
    }
}

}  // namespace mfgeq
