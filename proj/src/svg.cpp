#include "dlm/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "dlm/errors.hpp"

namespace dlm {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 480;
constexpr int kMargin = 24;
constexpr int kLegendWidth = 150;
constexpr int kMaxClasses = 50;

std::string format_num(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3f", value);
    return buf;
}

// evenly spaced hues, fixed saturation/value
std::string palette_color(int i, int total) {
    double h = total > 0 ? 360.0 * static_cast<double>(i) / static_cast<double>(total) : 0.0;
    double s = 0.65, v = 0.85;
    double c = v * s;
    double hp = h / 60.0;
    double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    if (hp < 1) {
        r = c; g = x;
    } else if (hp < 2) {
        r = x; g = c;
    } else if (hp < 3) {
        g = c; b = x;
    } else if (hp < 4) {
        g = x; b = c;
    } else if (hp < 5) {
        r = x; b = c;
    } else {
        r = c; b = x;
    }
    double m = v - c;
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", static_cast<int>(std::lround((r + m) * 255)),
                  static_cast<int>(std::lround((g + m) * 255)),
                  static_cast<int>(std::lround((b + m) * 255)));
    return buf;
}

std::string escape_xml(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

} // namespace

std::string emit_scatter(const Eigen::MatrixXd& coords, const std::vector<std::string>& labels) {
    if (coords.cols() != 2 && coords.rows() > 0)
        raise(Err::ShapeMismatch, "scatter coordinates must have two columns");
    if (static_cast<Eigen::Index>(labels.size()) != coords.rows())
        raise(Err::ShapeMismatch, "one label per point required");

    std::map<std::string, int> classes; // label -> palette slot, lexicographic
    for (const std::string& label : labels) classes.emplace(label, 0);
    if (classes.size() > kMaxClasses)
        raise(Err::TooManyClasses, "more than " + std::to_string(kMaxClasses) +
                                       " distinct labels");
    int slot = 0;
    for (auto& [label, id] : classes) id = slot++;

    const int total_width = kWidth + (classes.empty() ? 0 : kLegendWidth);
    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(total_width) +
           "\" height=\"" + std::to_string(kHeight) + "\" viewBox=\"0 0 " +
           std::to_string(total_width) + " " + std::to_string(kHeight) + "\">\n";
    svg += "<rect width=\"" + std::to_string(total_width) + "\" height=\"" +
           std::to_string(kHeight) + "\" fill=\"white\"/>\n";

    if (coords.rows() > 0) {
        double xmin = coords.col(0).minCoeff(), xmax = coords.col(0).maxCoeff();
        double ymin = coords.col(1).minCoeff(), ymax = coords.col(1).maxCoeff();
        double xspan = xmax - xmin, yspan = ymax - ymin;
        if (xspan <= 0.0) xspan = 1.0;
        if (yspan <= 0.0) yspan = 1.0;
        for (Eigen::Index i = 0; i < coords.rows(); ++i) {
            double px = kMargin + (coords(i, 0) - xmin) / xspan * (kWidth - 2 * kMargin);
            // SVG y grows downward
            double py = kHeight - kMargin - (coords(i, 1) - ymin) / yspan * (kHeight - 2 * kMargin);
            int id = classes.at(labels[static_cast<std::size_t>(i)]);
            svg += "<circle cx=\"" + format_num(px) + "\" cy=\"" + format_num(py) +
                   "\" r=\"3\" fill=\"" + palette_color(id, static_cast<int>(classes.size())) +
                   "\" fill-opacity=\"0.8\"/>\n";
        }
    }

    int row = 0;
    for (const auto& [label, id] : classes) {
        int ly = kMargin + row * 20;
        svg += "<rect x=\"" + std::to_string(kWidth + 8) + "\" y=\"" + std::to_string(ly) +
               "\" width=\"12\" height=\"12\" fill=\"" +
               palette_color(id, static_cast<int>(classes.size())) + "\"/>\n";
        svg += "<text x=\"" + std::to_string(kWidth + 26) + "\" y=\"" + std::to_string(ly + 10) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" + escape_xml(label) +
               "</text>\n";
        ++row;
    }

    svg += "</svg>\n";
    return svg;
}

} // namespace dlm
