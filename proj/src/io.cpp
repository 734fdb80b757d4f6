#include "plap/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

namespace plap {

namespace {

nlohmann::json finite_or_string(double v) {
    if (std::isfinite(v)) return v;
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string tok;
    std::stringstream ss(line);
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_profile_csv(std::ostream& os, const FrequencyProfile& profile) {
    os << "r,I,D,F,Iprime,F_defined\n";
    for (size_t j = 0; j < profile.radii.size(); ++j) {
        os << format_double(profile.radii[j]) << ',' << format_double(profile.I[j]) << ','
           << format_double(profile.D[j]) << ',';
        if (profile.F_defined[j]) os << format_double(profile.F[j]);
        os << ',' << format_double(profile.Iprime[j]) << ','
           << (profile.F_defined[j] ? 1 : 0) << "\n";
    }
}

FrequencyProfile read_profile_csv(std::istream& is) {
    FrequencyProfile profile;
    profile.M = std::numeric_limits<double>::quiet_NaN();
    std::string line;
    if (!std::getline(is, line) || line != "r,I,D,F,Iprime,F_defined")
        throw IoError("profile csv: unexpected header '" + line + "'");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cols = split_csv_line(line);
        if (cols.size() != 6) throw IoError("profile csv: malformed row '" + line + "'");
        profile.radii.push_back(std::stod(cols[0]));
        profile.I.push_back(std::stod(cols[1]));
        profile.D.push_back(std::stod(cols[2]));
        const bool defined = cols[5] == "1";
        profile.F_defined.push_back(defined ? 1 : 0);
        profile.F.push_back(defined ? std::stod(cols[3])
                                    : std::numeric_limits<double>::quiet_NaN());
        profile.Iprime.push_back(std::stod(cols[4]));
        if (defined) {
            const double F = profile.F.back();
            if (std::isnan(profile.M) || F > profile.M) profile.M = F;
        }
    }
    return profile;
}

nlohmann::json to_json(const SolveReport& report) {
    nlohmann::json stages = nlohmann::json::array();
    for (const StageRecord& st : report.stages) {
        stages.push_back({{"eps", st.eps},
                          {"energy", st.energies.empty() ? 0.0 : st.energies.back()},
                          {"iterations", st.iterations},
                          {"residual", st.residual}});
    }
    nlohmann::json j{{"p", report.p},
                     {"eps_stages", stages},
                     {"energy", report.energy},
                     {"residual", report.residual},
                     {"iterations", report.iterations},
                     {"converged", report.converged}};
    if (!report.message.empty()) j["message"] = report.message;
    return j;
}

nlohmann::json to_json(const DoublingReport& report) {
    return {{"p", report.p},
            {"M", finite_or_string(report.M)},
            {"eps0", finite_or_string(report.eps0)},
            {"r0", report.r0},
            {"r_star", report.r_star},
            {"max_ratio", report.max_ratio},
            {"pass", report.pass}};
}

namespace {

struct PlotBox {
    double x0 = 90, y0 = 40, w = 640, h = 400;
    double rmin = 0, rmax = 1, vmin = 0, vmax = 1;

    double px(double r) const { return x0 + (r - rmin) / (rmax - rmin) * w; }
    double py(double v) const { return y0 + h - (v - vmin) / (vmax - vmin) * h; }
};

void emit_series(std::ostream& os, const PlotBox& box, const FrequencyProfile& profile,
                 const std::vector<double>& values, const std::vector<std::uint8_t>* defined,
                 const char* name, const char* color) {
    size_t j = 0;
    const size_t count = profile.radii.size();
    while (j < count) {
        while (j < count && defined && !(*defined)[j]) ++j;
        size_t run = j;
        while (run < count && (!defined || (*defined)[run])) ++run;
        if (run - j >= 2) {
            os << "  <polyline class=\"series-" << name << "\" fill=\"none\" stroke=\"" << color
               << "\" stroke-width=\"1.5\" points=\"";
            for (size_t k = j; k < run; ++k)
                os << box.px(profile.radii[k]) << ',' << box.py(values[k]) << ' ';
            os << "\"/>\n";
        } else if (run - j == 1) {
            os << "  <circle class=\"series-" << name << "\" cx=\"" << box.px(profile.radii[j])
               << "\" cy=\"" << box.py(values[j]) << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
        }
        j = run;
    }
}

} // namespace

void emit_plot(std::ostream& os, const FrequencyProfile& profile, bool with_I, bool with_D,
               bool with_F) {
    if (profile.radii.empty()) throw std::invalid_argument("plot needs a non-empty profile");
    PlotBox box;
    box.rmin = profile.radii.front();
    box.rmax = profile.radii.back();
    if (box.rmax == box.rmin) {
        box.rmin -= 0.5;
        box.rmax += 0.5;
    }
    double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
    auto widen = [&](double v) {
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    };
    for (size_t j = 0; j < profile.radii.size(); ++j) {
        if (with_I) widen(profile.I[j]);
        if (with_D) widen(profile.D[j]);
        if (with_F && profile.F_defined[j]) widen(profile.F[j]);
    }
    if (!(vmin < vmax)) {
        vmin = std::isfinite(vmin) ? vmin - 0.5 : 0.0;
        vmax = vmin + 1.0;
    }
    const double pad = 0.05 * (vmax - vmin);
    box.vmin = vmin - pad;
    box.vmax = vmax + pad;

    os.precision(8);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"780\" height=\"490\" "
          "viewBox=\"0 0 780 490\">\n";
    os << "  <rect x=\"" << box.x0 << "\" y=\"" << box.y0 << "\" width=\"" << box.w
       << "\" height=\"" << box.h << "\" fill=\"white\" stroke=\"#444\"/>\n";
    for (int tick = 0; tick <= 5; ++tick) {
        const double r = box.rmin + (box.rmax - box.rmin) * tick / 5.0;
        const double v = box.vmin + (box.vmax - box.vmin) * tick / 5.0;
        os << "  <line x1=\"" << box.px(r) << "\" y1=\"" << box.y0 + box.h << "\" x2=\""
           << box.px(r) << "\" y2=\"" << box.y0 + box.h + 5 << "\" stroke=\"#444\"/>\n";
        os << "  <text x=\"" << box.px(r) << "\" y=\"" << box.y0 + box.h + 20
           << "\" font-size=\"11\" text-anchor=\"middle\">" << r << "</text>\n";
        os << "  <line x1=\"" << box.x0 - 5 << "\" y1=\"" << box.py(v) << "\" x2=\"" << box.x0
           << "\" y2=\"" << box.py(v) << "\" stroke=\"#444\"/>\n";
        os << "  <text x=\"" << box.x0 - 9 << "\" y=\"" << box.py(v) + 4
           << "\" font-size=\"11\" text-anchor=\"end\">" << v << "</text>\n";
    }
    os << "  <text x=\"" << box.x0 + box.w / 2 << "\" y=\"" << box.y0 + box.h + 38
       << "\" font-size=\"12\" text-anchor=\"middle\">r</text>\n";

    if (with_I) emit_series(os, box, profile, profile.I, nullptr, "I", "#1f77b4");
    if (with_D) emit_series(os, box, profile, profile.D, nullptr, "D", "#2ca02c");
    if (with_F) emit_series(os, box, profile, profile.F, &profile.F_defined, "F", "#d62728");

    double lx = box.x0 + 10, ly = box.y0 + 18;
    auto legend = [&](const char* name, const char* color, bool on) {
        if (!on) return;
        os << "  <rect x=\"" << lx << "\" y=\"" << ly - 9 << "\" width=\"14\" height=\"4\" fill=\""
           << color << "\"/>\n";
        os << "  <text x=\"" << lx + 20 << "\" y=\"" << ly
           << "\" font-size=\"12\">" << name << "</text>\n";
        ly += 16;
    };
    legend("I(r)", "#1f77b4", with_I);
    legend("D(r)", "#2ca02c", with_D);
    legend("F(r)", "#d62728", with_F);
    os << "</svg>\n";
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    os << content;
    if (!os) throw IoError("write to '" + path + "' failed");
}

std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << is.rdbuf();
    return buf.str();
}

} // namespace plap
