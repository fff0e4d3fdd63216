#pragma once

#include <array>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "scp/errors.hpp"
#include "scp/roc.hpp"

namespace scp {

// Minimal self-contained ROC plot: axes with 0.2 ticks, the chance diagonal,
// one polyline per fold, optional mean curve, legend with AUROCs.
class RocSvgPlot {
public:
    RocSvgPlot(int width = 640, int height = 520) : width_(width), height_(height) {}

    void add_curve(const RocCurve& curve, const std::string& label) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& p : curve.points) pts.emplace_back(p.fpr, p.tpr);
        series_.push_back({std::move(pts), label, false});
    }

    void add_mean(const MeanRoc& mean, const std::string& label) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& p : mean.grid) pts.emplace_back(p.fpr, p.tpr);
        series_.push_back({std::move(pts), label, true});
    }

    void render(std::ostream& os, const std::string& title,
                const std::vector<std::string>& comments = {}) const {
        const double ml = 60, mr = 20, mt = 40, mb = 50;
        const double pw = width_ - ml - mr;
        const double ph = height_ - mt - mb;
        auto px = [&](double fpr) { return ml + fpr * pw; };
        auto py = [&](double tpr) { return mt + (1.0 - tpr) * ph; };

        os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        for (const auto& c : comments) os << "<!-- " << c << " -->\n";
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\""
           << height_ << "\" viewBox=\"0 0 " << width_ << " " << height_ << "\">\n";
        os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        os << "<text x=\"" << width_ / 2 << "\" y=\"24\" text-anchor=\"middle\" "
              "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

        // Axes, ticks, grid.
        os << "<g stroke=\"black\" fill=\"none\">"
           << "<path d=\"M" << fmt(px(0)) << " " << fmt(py(0)) << " L" << fmt(px(1)) << " "
           << fmt(py(0)) << "\"/>"
           << "<path d=\"M" << fmt(px(0)) << " " << fmt(py(0)) << " L" << fmt(px(0)) << " "
           << fmt(py(1)) << "\"/></g>\n";
        for (int i = 0; i <= 5; ++i) {
            const double v = i / 5.0;
            os << "<line x1=\"" << fmt(px(v)) << "\" y1=\"" << fmt(py(0)) << "\" x2=\""
               << fmt(px(v)) << "\" y2=\"" << fmt(py(0) + 5) << "\" stroke=\"black\"/>\n";
            os << "<text x=\"" << fmt(px(v)) << "\" y=\"" << fmt(py(0) + 20)
               << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
               << fmt(v) << "</text>\n";
            os << "<line x1=\"" << fmt(px(0)) << "\" y1=\"" << fmt(py(v)) << "\" x2=\""
               << fmt(px(0) - 5) << "\" y2=\"" << fmt(py(v)) << "\" stroke=\"black\"/>\n";
            os << "<text x=\"" << fmt(px(0) - 8) << "\" y=\"" << fmt(py(v) + 4)
               << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(v)
               << "</text>\n";
        }
        os << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\"" << height_ - 10
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
              "False positive rate</text>\n";
        os << "<text x=\"16\" y=\"" << fmt(mt + ph / 2)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
              "transform=\"rotate(-90 16 " << fmt(mt + ph / 2) << ")\">True positive rate</text>\n";

        // Chance diagonal.
        os << "<line x1=\"" << fmt(px(0)) << "\" y1=\"" << fmt(py(0)) << "\" x2=\"" << fmt(px(1))
           << "\" y2=\"" << fmt(py(1))
           << "\" stroke=\"#999999\" stroke-dasharray=\"6 4\"/>\n";

        std::size_t color = 0;
        double legend_y = mt + 14;
        for (const auto& s : series_) {
            const std::string stroke = s.mean ? "black" : kPalette[color % kPalette.size()];
            const std::string sw = s.mean ? "2.5" : "1.5";
            if (!s.mean) ++color;
            os << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << sw
               << "\" points=\"";
            for (const auto& [fpr, tpr] : s.points) os << fmt(px(fpr)) << "," << fmt(py(tpr)) << " ";
            os << "\"/>\n";
            os << "<line x1=\"" << fmt(px(1) - 170) << "\" y1=\"" << fmt(legend_y - 4)
               << "\" x2=\"" << fmt(px(1) - 150) << "\" y2=\"" << fmt(legend_y - 4)
               << "\" stroke=\"" << stroke << "\" stroke-width=\"" << sw << "\"/>\n";
            os << "<text x=\"" << fmt(px(1) - 144) << "\" y=\"" << fmt(legend_y)
               << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label << "</text>\n";
            legend_y += 16;
        }
        os << "</svg>\n";
    }

    void render_file(const std::string& path, const std::string& title,
                     const std::vector<std::string>& comments = {}) const {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw DataError("cannot open for writing: " + path);
        render(f, title, comments);
    }

private:
    struct Series {
        std::vector<std::pair<double, double>> points;
        std::string label;
        bool mean = false;
    };

    static std::string fmt(double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.2f", v);
        return buf;
    }

    static constexpr std::array<const char*, 8> kPalette = {
        "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
        "#9467bd", "#8c564b", "#e377c2", "#17becf"};

    int width_;
    int height_;
    std::vector<Series> series_;
};

}  // namespace scp
