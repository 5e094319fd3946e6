#include "xews/svg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "xews/export.hpp"

namespace xews {

namespace {

std::string num(double v) { return format_number(v); }

void open_doc(std::ostringstream& s, double w, double h) {
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\""
      << num(h) << "\" viewBox=\"0 0 " << num(w) << " " << num(h) << "\">\n"
      << "<rect width=\"" << num(w) << "\" height=\"" << num(h) << "\" fill=\"white\"/>\n";
}

void text(std::ostringstream& s, double x, double y, const std::string& t,
          const std::string& anchor = "start", int size = 11) {
    s << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-family=\"sans-serif\""
      << " font-size=\"" << size << "\" text-anchor=\"" << anchor << "\">" << t
      << "</text>\n";
}

void line(std::ostringstream& s, double x1, double y1, double x2, double y2,
          const std::string& stroke = "black", double width = 1.0) {
    s << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2)
      << "\" y2=\"" << num(y2) << "\" stroke=\"" << stroke << "\" stroke-width=\""
      << num(width) << "\"/>\n";
}

// Diverging blue -> red ramp for value percentiles, clamped to [0.05, 0.95].
std::string percentile_color(double p) {
    const double t = (std::clamp(p, 0.05, 0.95) - 0.05) / 0.90;
    const int r = static_cast<int>(std::lround(59.0 + t * (180.0 - 59.0)));
    const int g = static_cast<int>(std::lround(76.0 + t * (4.0 - 76.0)));
    const int b = static_cast<int>(std::lround(192.0 + t * (38.0 - 192.0)));
    std::ostringstream s;
    s << "rgb(" << r << "," << g << "," << b << ")";
    return s.str();
}

struct BarFigure {
    std::vector<std::pair<std::string, double>> bars; // label, value
    std::string title;
};

std::string render_bars(const BarFigure& fig) {
    const double width = 640.0, row_h = 26.0, left = 190.0, right = 30.0, top = 40.0;
    const double height = top + fig.bars.size() * row_h + 20.0;
    double vmax = 0.0;
    for (const auto& [label, v] : fig.bars) vmax = std::max(vmax, v);
    if (vmax <= 0.0) vmax = 1.0;
    std::ostringstream s;
    open_doc(s, width, height);
    text(s, width / 2, 22, fig.title, "middle", 13);
    for (std::size_t i = 0; i < fig.bars.size(); ++i) {
        const double y = top + i * row_h;
        const double w = (width - left - right) * fig.bars[i].second / vmax;
        text(s, left - 6, y + row_h * 0.65, fig.bars[i].first, "end");
        s << "<rect x=\"" << num(left) << "\" y=\"" << num(y + 4) << "\" width=\""
          << num(w) << "\" height=\"" << num(row_h - 8)
          << "\" fill=\"steelblue\"/>\n";
        text(s, left + w + 4, y + row_h * 0.65, num(fig.bars[i].second), "start", 9);
    }
    s << "</svg>\n";
    return s.str();
}

} // namespace

std::string svg_horizon_lines(const std::vector<SweepRow>& rows, Illness illness) {
    // Fold-mean AUROC per (model, horizon).
    std::map<ModelFamily, std::map<double, std::pair<double, int>>> acc;
    for (const SweepRow& r : rows) {
        auto& cell = acc[r.model][r.horizon];
        cell.first += r.auroc;
        cell.second += 1;
    }
    const double width = 640.0, height = 420.0;
    const double left = 60.0, right = 150.0, top = 40.0, bottom = 50.0;
    const double x0 = left, x1 = width - right, y0 = height - bottom, y1 = top;
    const double h_max = kHorizons.back();

    auto x_of = [&](double h) { return x0 + (x1 - x0) * h / h_max; };
    auto y_of = [&](double auroc) {
        return y0 - (y0 - y1) * (std::clamp(auroc, 0.5, 1.0) - 0.5) / 0.5;
    };

    std::ostringstream s;
    open_doc(s, width, height);
    text(s, (x0 + x1) / 2, 22, "AUROC by hours before " + to_string(illness) + " onset",
         "middle", 13);
    line(s, x0, y0, x1, y0);
    line(s, x0, y0, x0, y1);
    for (double g = 0.5; g <= 1.0 + 1e-9; g += 0.1) {
        line(s, x0 - 4, y_of(g), x0, y_of(g));
        text(s, x0 - 8, y_of(g) + 4, num(g), "end", 10);
    }
    for (double h : kHorizons) {
        line(s, x_of(h), y0, x_of(h), y0 + 4);
        text(s, x_of(h), y0 + 16, num(h), "middle", 10);
    }
    text(s, (x0 + x1) / 2, height - 14, "hours before onset", "middle");

    const std::map<ModelFamily, std::string> colors = {
        {ModelFamily::Tcn, "crimson"},
        {ModelFamily::GbVital, "darkorange"},
        {ModelFamily::Mews, "steelblue"},
        {ModelFamily::Sofa, "seagreen"},
    };
    double legend_y = top + 10.0;
    for (const auto& [model, series] : acc) {
        const std::string& color = colors.at(model);
        std::ostringstream pts;
        for (const auto& [h, cell] : series) {
            const double mean = cell.first / cell.second;
            pts << num(x_of(h)) << ',' << num(y_of(mean)) << ' ';
            s << "<circle cx=\"" << num(x_of(h)) << "\" cy=\"" << num(y_of(mean))
              << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        }
        s << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\"/>\n";
        line(s, x1 + 10, legend_y, x1 + 34, legend_y, color, 2.0);
        text(s, x1 + 40, legend_y + 4, to_string(model));
        legend_y += 18.0;
    }
    s << "</svg>\n";
    return s.str();
}

std::string svg_top_parameters(const RelevanceMap& map, std::size_t k) {
    const std::size_t t_dim = map.values.shape[0], p_dim = map.values.shape[1];
    BarFigure fig;
    fig.title = "Top parameters by mean relevance (risk " + format_number(map.prediction) + ")";
    for (int p : top_k(map, k)) {
        double sum = 0.0;
        for (std::size_t t = 0; t < t_dim; ++t) sum += map.values.v[t * p_dim + p];
        fig.bars.push_back({event_name(p), sum / static_cast<double>(t_dim)});
    }
    return render_bars(fig);
}

std::string svg_global_importance(const GlobalImportance& gi, std::size_t k) {
    BarFigure fig;
    fig.title = "Population mean relevance by parameter";
    for (std::size_t i = 0; i < gi.order.size() && i < k; ++i) {
        const int p = gi.order[i];
        fig.bars.push_back({event_name(p), gi.mean_relevance[p]});
    }
    return render_bars(fig);
}

std::string svg_local_summary(const std::vector<LocalSummaryPoint>& points,
                              const GlobalImportance& gi, std::size_t k) {
    std::vector<int> params;
    for (std::size_t i = 0; i < gi.order.size() && i < k; ++i) params.push_back(gi.order[i]);
    const double width = 680.0, row_h = 30.0, left = 190.0, right = 40.0, top = 40.0;
    const double height = top + params.size() * row_h + 30.0;
    double rmax = 0.0;
    for (const LocalSummaryPoint& pt : points) rmax = std::max(rmax, pt.relevance);
    if (rmax <= 0.0) rmax = 1.0;

    std::ostringstream s;
    open_doc(s, width, height);
    text(s, width / 2, 22, "Per-observation relevance, colored by value percentile",
         "middle", 13);
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double yc = top + i * row_h + row_h / 2;
        text(s, left - 6, yc + 4, event_name(params[i]), "end");
        line(s, left, yc, width - right, yc, "gainsboro", 1.0);
        // Deterministic vertical jitter from the point's rank within the row.
        std::size_t n_in_row = 0;
        for (const LocalSummaryPoint& pt : points) {
            if (pt.parameter != params[i]) continue;
            const double x = left + (width - left - right) * pt.relevance / rmax;
            const double jitter = ((n_in_row % 7) - 3.0) * 2.5;
            s << "<circle cx=\"" << num(x) << "\" cy=\"" << num(yc + jitter)
              << "\" r=\"2.2\" fill=\"" << percentile_color(pt.percentile)
              << "\" fill-opacity=\"0.75\"/>\n";
            ++n_in_row;
        }
    }
    text(s, (left + width - right) / 2, height - 10, "relevance", "middle");
    s << "</svg>\n";
    return s.str();
}

} // namespace xews
