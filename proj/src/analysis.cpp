#include "svb/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace svb::analysis {

ShapeAggregate aggregate_shape(const std::vector<sim::FidelityRecord>& records, double threshold) {
    std::vector<const sim::FidelityRecord*> usable;
    for (const auto& r : records) {
        if (!r.failed) usable.push_back(&r);
    }
    if (usable.empty()) throw InputError("no usable records for this shape");
    ShapeAggregate agg;
    agg.w = usable.front()->w;
    agg.d = usable.front()->d;
    for (const auto* r : usable) {
        if (r->w != agg.w || r->d != agg.d) throw InputError("records mix shapes");
    }
    agg.k_used = static_cast<int>(usable.size());
    double dropped = 0.0;
    for (const auto* r : usable) dropped += r->dropped_frac;
    agg.mean_dropped_frac = dropped / agg.k_used;

    for (const auto* r : usable) {
        if (r->f < threshold) {
            agg.excluded = true;
            agg.reason = "fidelity estimate below threshold " + std::to_string(threshold);
            return agg;
        }
    }
    // geometric mean in log space; mc estimates may overshoot 1 by noise
    double log_sum = 0.0;
    double var_log_gm = 0.0;
    for (const auto* r : usable) {
        log_sum += std::log(std::min(r->f, 1.0));
        const double rel = r->stderr_f / r->f;
        var_log_gm += rel * rel;
    }
    const double log_gm = log_sum / agg.k_used;
    var_log_gm /= static_cast<double>(agg.k_used) * static_cast<double>(agg.k_used);
    agg.gm_fidelity = std::exp(log_gm);
    const double quops = static_cast<double>(agg.w) * static_cast<double>(agg.d);
    agg.eps = std::max(0.0, -std::expm1(log_gm / quops));
    // first-order propagation: eps_stderr = (1-eps)/quops * sd(log GM)
    agg.eps_stderr = (1.0 - agg.eps) / quops * std::sqrt(var_log_gm);
    return agg;
}

std::vector<ShapeAggregate> aggregate_all(const std::vector<sim::FidelityRecord>& records,
                                          double threshold) {
    std::map<std::pair<int, int>, std::vector<sim::FidelityRecord>> groups;
    for (const auto& r : records) {
        if (r.failed) continue;
        groups[{r.w, r.d}].push_back(r);
    }
    std::vector<ShapeAggregate> out;
    out.reserve(groups.size());
    for (const auto& [shape, recs] : groups) out.push_back(aggregate_shape(recs, threshold));
    return out;
}

FidelityPrediction predict_target_fidelity(double eps, long long quops) {
    if (!(eps >= 0.0) || eps >= 1.0) throw InputError("eps must lie in [0,1)");
    FidelityPrediction p;
    const double log_f = static_cast<double>(quops) * std::log1p(-eps);
    p.log10_f = log_f / std::log(10.0);
    if (p.log10_f > -300.0) p.f = std::exp(log_f);
    return p;
}

std::optional<double> depth_average(const std::vector<ShapeAggregate>& aggregates_at_width) {
    if (aggregates_at_width.empty()) return std::nullopt;
    const int w = aggregates_at_width.front().w;
    double sum = 0.0;
    int used = 0;
    for (const auto& a : aggregates_at_width) {
        if (a.w != w) throw InputError("aggregates mix widths");
        if (a.excluded) continue;
        sum += a.eps;
        ++used;
    }
    if (used == 0) return std::nullopt;
    return sum / used;
}

std::map<int, double> depth_average_table(const std::vector<ShapeAggregate>& aggregates) {
    std::map<int, std::vector<ShapeAggregate>> by_width;
    for (const auto& a : aggregates) by_width[a.w].push_back(a);
    std::map<int, double> table;
    for (const auto& [w, aggs] : by_width) {
        if (auto eps = depth_average(aggs)) table[w] = *eps;
    }
    return table;
}

CapabilitySummary capability_summary(const std::map<int, double>& eps_w, int target_w, int target_d,
                                     bool allow_partial) {
    CapabilitySummary s;
    s.target_w = target_w;
    s.target_d = target_d;
    s.q_t = static_cast<long long>(target_w) * static_cast<long long>(target_d);
    if (eps_w.empty()) {
        if (allow_partial) return s;
        throw IncompleteDataError("no widths with a defined effective error rate");
    }
    s.w_max = eps_w.rbegin()->first;

    std::vector<std::string> missing;
    const auto it2 = eps_w.find(2);
    if (it2 == eps_w.end()) missing.push_back("w=2");
    if (!allow_partial && !missing.empty()) {
        std::string msg = "missing required widths:";
        for (const auto& m : missing) msg += " " + m;
        throw IncompleteDataError(msg);
    }

    const double eps_max = eps_w.rbegin()->second;
    s.eps_wmax = eps_max;
    if (eps_max > 0.0) s.qc = 1.0 / eps_max;
    {
        const auto pred = predict_target_fidelity(eps_max, s.q_t);
        s.f_log10 = pred.log10_f;
        s.f_linear = pred.f;
    }
    if (it2 != eps_w.end()) {
        s.eps2 = it2->second;
        if (*s.eps2 > 0.0) s.q0 = 1.0 / *s.eps2;
        const auto pred = predict_target_fidelity(*s.eps2, s.q_t);
        s.f0_log10 = pred.log10_f;
        s.f0_linear = pred.f;
        if (s.q0 && s.qc) s.scalability = *s.qc / *s.q0;
    }
    if (s.qc && s.q_t > 0) s.capability = *s.qc / static_cast<double>(s.q_t);
    return s;
}

}  // namespace svb::analysis
