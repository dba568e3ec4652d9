#include "svb/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "svb/io.hpp"

namespace svb::report {

namespace {

// fixed 8-step monochrome-to-warm ramp, light (F ~ 1) to dark (F ~ 0)
const char* kRamp[8] = {"#f7f3ee", "#f2e3c9", "#ecd2a4", "#e5be7f",
                        "#dda55c", "#d2883b", "#b9641f", "#8f3a10"};

const char* ramp_color(double fidelity) {
    int bucket = static_cast<int>(std::floor((1.0 - fidelity) * 8.0));
    bucket = std::clamp(bucket, 0, 7);
    return kRamp[bucket];
}

std::string fmt(double v, const char* spec = "%.2f") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

}  // namespace

double round_sig(double x, int sig) {
    if (x == 0.0 || !std::isfinite(x)) return x;
    const double e = std::floor(std::log10(std::abs(x)) + 1e-12);
    const double f = std::pow(10.0, sig - 1 - e);
    return std::round(x * f) / f;
}

std::string format_quops(double q) {
    if (!(q > 0.0) || !std::isfinite(q)) return "n/a";
    const double v = round_sig(q, 2);
    const int e = static_cast<int>(std::floor(std::log10(v) + 1e-12));
    const int decimals = std::max(0, 1 - e);
    return fmt(v, decimals == 0 ? "%.0f" : (decimals == 1 ? "%.1f" : "%.2f"));
}

std::string format_percent(double fraction) {
    if (!std::isfinite(fraction)) return "n/a";
    const double p = fraction * 100.0;
    if (p == 0.0) return "0%";
    const int sig = p >= 9.5 ? 2 : 1;
    const double v = round_sig(p, sig);
    const int e = static_cast<int>(std::floor(std::log10(std::abs(v)) + 1e-12));
    const int decimals = std::max(0, sig - 1 - e);
    char spec[8];
    std::snprintf(spec, sizeof(spec), "%%.%df%%%%", decimals);
    return fmt(v, spec);
}

std::vector<VolumetricCell> volumetric_cells(const std::vector<VolumetricSeries>& series,
                                             snip::Shape target) {
    if (series.empty()) throw InputError("volumetric plot needs at least one aggregate");
    if (series.size() > 2) throw InputError("at most two variants can be overlaid");
    std::vector<VolumetricCell> cells;
    for (const auto& s : series) {
        std::vector<analysis::ShapeAggregate> sorted = s.aggregates;
        std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
            return a.w != b.w ? a.w < b.w : a.d < b.d;
        });
        for (const auto& a : sorted) {
            VolumetricCell c;
            c.w = a.w;
            c.d = a.d;
            c.mean_fidelity = a.excluded ? 0.0 : a.gm_fidelity;
            c.dropped_fraction = a.mean_dropped_frac;
            c.marker_size = 0.35 + 0.65 * (1.0 - a.mean_dropped_frac);
            c.is_target = (a.w == target.w && a.d == target.d);
            c.excluded = a.excluded;
            c.variant = s.variant;
            cells.push_back(std::move(c));
        }
    }
    return cells;
}

namespace {

std::string volumetric_svg(const std::vector<VolumetricCell>& cells, snip::Shape target) {
    const double width_px = 640, height_px = 440;
    const double ml = 70, mr = 30, mt = 42, mb = 58;
    const double pw = width_px - ml - mr, ph = height_px - mt - mb;

    double lg_min = std::log10(static_cast<double>(std::max(1, target.d)));
    double lg_max = lg_min;
    int w_min = target.w, w_max = target.w;
    for (const auto& c : cells) {
        lg_min = std::min(lg_min, std::log10(static_cast<double>(std::max(1, c.d))));
        lg_max = std::max(lg_max, std::log10(static_cast<double>(std::max(1, c.d))));
        w_min = std::min(w_min, c.w);
        w_max = std::max(w_max, c.w);
    }
    lg_min -= 0.25;
    lg_max += 0.25;
    const double w_lo = w_min - 0.8, w_hi = w_max + 0.8;

    auto x_of = [&](double d) { return ml + (std::log10(std::max(1.0, d)) - lg_min) / (lg_max - lg_min) * pw; };
    auto y_of = [&](double w) { return mt + (w_hi - w) / (w_hi - w_lo) * ph; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width_px, "%.0f") +
           "\" height=\"" + fmt(height_px, "%.0f") + "\" viewBox=\"0 0 " + fmt(width_px, "%.0f") +
           " " + fmt(height_px, "%.0f") + "\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + fmt(width_px, "%.0f") + "\" height=\"" +
           fmt(height_px, "%.0f") + "\" fill=\"#ffffff\"/>\n";
    svg += "<text x=\"" + fmt(ml) + "\" y=\"24\" font-family=\"monospace\" font-size=\"14\">" +
           "subcircuit volumetric benchmark</text>\n";
    // axes
    svg += "<rect x=\"" + fmt(ml) + "\" y=\"" + fmt(mt) + "\" width=\"" + fmt(pw) + "\" height=\"" +
           fmt(ph) + "\" fill=\"none\" stroke=\"#444444\"/>\n";
    for (int e = static_cast<int>(std::ceil(lg_min)); e <= static_cast<int>(std::floor(lg_max)); ++e) {
        const double x = ml + (e - lg_min) / (lg_max - lg_min) * pw;
        svg += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(mt + ph) + "\" x2=\"" + fmt(x) + "\" y2=\"" +
               fmt(mt + ph + 5) + "\" stroke=\"#444444\"/>\n";
        svg += "<text x=\"" + fmt(x - 8) + "\" y=\"" + fmt(mt + ph + 20) +
               "\" font-family=\"monospace\" font-size=\"11\">1e" + std::to_string(e) + "</text>\n";
    }
    std::set<int> widths;
    for (const auto& c : cells) widths.insert(c.w);
    widths.insert(target.w);
    for (int w : widths) {
        const double y = y_of(w);
        svg += "<line x1=\"" + fmt(ml - 5) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(ml) + "\" y2=\"" +
               fmt(y) + "\" stroke=\"#444444\"/>\n";
        svg += "<text x=\"" + fmt(ml - 34) + "\" y=\"" + fmt(y + 4) +
               "\" font-family=\"monospace\" font-size=\"11\">" + std::to_string(w) + "</text>\n";
    }
    svg += "<text x=\"" + fmt(ml + pw / 2 - 60) + "\" y=\"" + fmt(height_px - 16) +
           "\" font-family=\"monospace\" font-size=\"12\">depth (log scale)</text>\n";
    svg += "<text x=\"16\" y=\"" + fmt(mt + ph / 2) +
           "\" font-family=\"monospace\" font-size=\"12\" transform=\"rotate(-90 16 " +
           fmt(mt + ph / 2) + ")\">width</text>\n";

    const double base = 24.0;
    int variant_index = 0;
    std::string last_variant;
    for (const auto& c : cells) {
        if (c.variant != last_variant && !last_variant.empty()) variant_index = 1;
        last_variant = c.variant;
        const double side = base * c.marker_size;
        const double dx = (variant_index == 0) ? -0.0 : base * 0.55;
        const double cx = x_of(c.d) + dx, cy = y_of(c.w);
        if (c.excluded) {
            svg += "<rect x=\"" + fmt(cx - side / 2) + "\" y=\"" + fmt(cy - side / 2) + "\" width=\"" +
                   fmt(side) + "\" height=\"" + fmt(side) +
                   "\" fill=\"none\" stroke=\"#8f3a10\" stroke-dasharray=\"3,2\"/>\n";
        } else {
            svg += "<rect x=\"" + fmt(cx - side / 2) + "\" y=\"" + fmt(cy - side / 2) + "\" width=\"" +
                   fmt(side) + "\" height=\"" + fmt(side) + "\" fill=\"" +
                   ramp_color(c.mean_fidelity) + "\" stroke=\"#555555\"/>\n";
        }
    }
    // target star
    {
        const double cx = x_of(target.d), cy = y_of(target.w), r1 = 13, r2 = 5.5;
        std::string pts;
        for (int i = 0; i < 10; ++i) {
            const double ang = -3.14159265358979323846 / 2.0 + i * 3.14159265358979323846 / 5.0;
            const double r = (i % 2 == 0) ? r1 : r2;
            pts += fmt(cx + r * std::cos(ang)) + "," + fmt(cy + r * std::sin(ang));
            if (i != 9) pts += " ";
        }
        svg += "<polygon points=\"" + pts + "\" fill=\"#f2c14e\" stroke=\"#333333\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

std::string volumetric_csv(const std::vector<VolumetricCell>& cells) {
    std::string csv = "# schema: svb.volumetric/1\n";
    csv += "variant,w,d,mean_fidelity,dropped_fraction,marker_size,excluded,is_target\n";
    for (const auto& c : cells) {
        csv += c.variant + "," + std::to_string(c.w) + "," + std::to_string(c.d) + "," +
               fmt(c.mean_fidelity, "%.12g") + "," + fmt(c.dropped_fraction, "%.12g") + "," +
               fmt(c.marker_size, "%.12g") + "," + (c.excluded ? "true" : "false") + "," +
               (c.is_target ? "true" : "false") + "\n";
    }
    return csv;
}

}  // namespace

void emit_volumetric(const std::vector<VolumetricSeries>& series, snip::Shape target,
                     const std::string& svg_path, const std::string& csv_path) {
    const auto cells = volumetric_cells(series, target);
    io::write_text(svg_path, volumetric_svg(cells, target));
    io::write_text(csv_path, volumetric_csv(cells));
}

void emit_volumetric(const std::vector<analysis::ShapeAggregate>& aggregates, snip::Shape target,
                     const std::string& svg_path, const std::string& csv_path) {
    emit_volumetric(std::vector<VolumetricSeries>{{"base", aggregates}}, target, svg_path, csv_path);
}

std::string summary_csv_text(const analysis::CapabilitySummary& s) {
    std::string csv = "# schema: svb.summary/1\n";
    csv +=
        "algorithm_size_quops,predicted_capability_quops,observed_capability_quops,"
        "scalability_coefficient,capability_coefficient\n";
    csv += format_quops(static_cast<double>(s.q_t)) + ",";
    csv += (s.q0 ? format_quops(*s.q0) : "n/a") + ",";
    csv += (s.qc ? format_quops(*s.qc) : "n/a") + ",";
    csv += (s.scalability ? format_percent(*s.scalability) : "n/a") + ",";
    csv += (s.capability ? format_percent(*s.capability) : "n/a");
    csv += "\n";
    return csv;
}

namespace {

void put_opt(io::json& j, const char* key, const std::optional<double>& v) {
    if (v) j[key] = *v;
    else j[key] = nullptr;
}

}  // namespace

std::string summary_json_text(const analysis::CapabilitySummary& s) {
    io::json j;
    j["schema"] = "svb.summary/1";
    j["q_t"] = s.q_t;
    j["target_w"] = s.target_w;
    j["target_d"] = s.target_d;
    j["w_max"] = s.w_max;
    put_opt(j, "eps2", s.eps2);
    put_opt(j, "eps_wmax", s.eps_wmax);
    put_opt(j, "q0", s.q0);
    put_opt(j, "qc", s.qc);
    put_opt(j, "f0_log10", s.f0_log10);
    put_opt(j, "f_log10", s.f_log10);
    put_opt(j, "f0", s.f0_linear);
    put_opt(j, "f", s.f_linear);
    put_opt(j, "scalability", s.scalability);
    put_opt(j, "capability", s.capability);
    return j.dump(2) + "\n";
}

void emit_summary(const analysis::CapabilitySummary& summary, const std::string& csv_path,
                  const std::string& json_path) {
    io::write_text(csv_path, summary_csv_text(summary));
    io::write_text(json_path, summary_json_text(summary));
}

std::string aggregates_json_text(const std::vector<analysis::ShapeAggregate>& aggregates) {
    io::json j;
    j["schema"] = "svb.aggregates/1";
    io::json arr = io::json::array();
    for (const auto& a : aggregates) {
        io::json ja;
        ja["w"] = a.w;
        ja["d"] = a.d;
        ja["k"] = a.k_used;
        ja["excluded"] = a.excluded;
        if (a.excluded) {
            ja["reason"] = a.reason;
        } else {
            ja["gm_fidelity"] = a.gm_fidelity;
            ja["eps"] = a.eps;
            ja["eps_stderr"] = a.eps_stderr;
        }
        ja["mean_dropped_frac"] = a.mean_dropped_frac;
        arr.push_back(std::move(ja));
    }
    j["aggregates"] = std::move(arr);
    return j.dump(2) + "\n";
}

std::vector<analysis::ShapeAggregate> parse_aggregates_json(const std::string& text) {
    io::json j;
    try {
        j = io::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what(), e.byte);
    }
    std::vector<analysis::ShapeAggregate> out;
    for (const auto& ja : j.at("aggregates")) {
        analysis::ShapeAggregate a;
        a.w = ja.at("w").get<int>();
        a.d = ja.at("d").get<int>();
        a.k_used = ja.value("k", 0);
        a.excluded = ja.value("excluded", false);
        if (a.excluded) {
            a.reason = ja.value("reason", "");
        } else {
            a.gm_fidelity = ja.at("gm_fidelity").get<double>();
            a.eps = ja.at("eps").get<double>();
            a.eps_stderr = ja.value("eps_stderr", 0.0);
        }
        a.mean_dropped_frac = ja.value("mean_dropped_frac", 0.0);
        out.push_back(std::move(a));
    }
    return out;
}

}  // namespace svb::report
