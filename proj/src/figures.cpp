#include "masmc/figures.hpp"

#include <charconv>

#include "masmc/rng.hpp"
#include "masmc/threat.hpp"

namespace masmc {

namespace {

std::string format_probability(double p) {
    char buf[40];
    auto [end, ec] =
        std::to_chars(buf, buf + sizeof(buf), p, std::chars_format::scientific, 16);
    return std::string(buf, end);
}

double parse_double(std::string_view field, size_t line_no) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ParseError("csv line " + std::to_string(line_no) +
                         ": bad probability field '" + std::string(field) + "'");
    }
    return value;
}

} // namespace

double eq_p_fragment(uint32_t r) {
    if (r == 0) {
        throw DomainError("fragment count must be >= 1");
    }
    return 1.0 / r;
}

double eq_p_dm(uint32_t m) {
    if (m == 0) {
        throw DomainError("decision maker count must be >= 1");
    }
    return 1.0 / m;
}

double eq_p_wrong_agent(uint32_t m, uint32_t p) {
    if (m == 0 || p == 0) {
        throw DomainError("decision maker and agent counts must be >= 1");
    }
    return 1.0 / m + 1.0 / p - 1.0 / (static_cast<double>(m) * p);
}

std::vector<SeriesPoint> emit_series(FigureKind kind, uint32_t lo, uint32_t hi,
                                     uint64_t trials, uint64_t seed) {
    if (lo < 1 || lo > hi) {
        throw DomainError("sweep range must satisfy 1 <= lo <= hi");
    }
    std::vector<SeriesPoint> series;
    series.reserve(hi - lo + 1);
    for (uint32_t x = lo; x <= hi; ++x) {
        AdversaryConfig config;
        config.trials = trials;
        SeriesPoint point;
        point.x = x;
        if (kind == FigureKind::fragment_capture_vs_r) {
            config.kind = ExperimentKind::fragment_capture;
            config.fragments_r = x;
            config.seed = derive_u64(seed, "figure.point", {1, x});
            point.p_closed = eq_p_fragment(x);
        } else {
            config.kind = ExperimentKind::corrupt_dm;
            config.dm_count_m = x;
            config.seed = derive_u64(seed, "figure.point", {2, x});
            point.p_closed = eq_p_dm(x);
        }
        const McEstimate est = mc_estimate(config);
        point.p_mc = est.p_hat;
        point.stderr_ = est.stderr_;
        series.push_back(point);
    }
    return series;
}

std::vector<SeriesPoint> emit_wrong_agent_series(uint32_t m_lo, uint32_t m_hi,
                                                 uint32_t p, uint64_t trials,
                                                 uint64_t seed) {
    if (m_lo < 1 || m_lo > m_hi || p < 1) {
        throw DomainError("sweep range must satisfy 1 <= lo <= hi and p >= 1");
    }
    std::vector<SeriesPoint> series;
    series.reserve(m_hi - m_lo + 1);
    for (uint32_t m = m_lo; m <= m_hi; ++m) {
        AdversaryConfig config;
        config.kind = ExperimentKind::wrong_agent;
        config.dm_count_m = m;
        config.agent_count_p = p;
        config.trials = trials;
        config.seed = derive_u64(seed, "figure.point", {3, m, p});
        const McEstimate est = mc_estimate(config);
        series.push_back({m, eq_p_wrong_agent(m, p), est.p_hat, est.stderr_});
    }
    return series;
}

std::string series_to_csv(std::span<const SeriesPoint> series) {
    std::string csv = "x,p_closed,p_mc,stderr\n";
    for (const SeriesPoint& point : series) {
        csv += std::to_string(point.x);
        csv += ",";
        csv += format_probability(point.p_closed);
        csv += ",";
        csv += format_probability(point.p_mc);
        csv += ",";
        csv += format_probability(point.stderr_);
        csv += "\n";
    }
    return csv;
}

std::vector<SeriesPoint> parse_series_csv(std::string_view csv) {
    std::vector<SeriesPoint> series;
    size_t line_no = 0;
    size_t pos = 0;
    while (pos < csv.size()) {
        size_t eol = csv.find('\n', pos);
        if (eol == std::string_view::npos) {
            throw ParseError("csv: missing trailing newline");
        }
        std::string_view line = csv.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (line_no == 1) {
            if (line != "x,p_closed,p_mc,stderr") {
                throw ParseError("csv line 1: unexpected header '" + std::string(line) + "'");
            }
            continue;
        }

        std::vector<std::string_view> fields;
        size_t start = 0;
        while (true) {
            size_t comma = line.find(',', start);
            if (comma == std::string_view::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        if (fields.size() != 4) {
            throw ParseError("csv line " + std::to_string(line_no) +
                             ": expected 4 fields, got " + std::to_string(fields.size()));
        }

        SeriesPoint point;
        uint32_t x = 0;
        auto [ptr, ec] =
            std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), x);
        if (ec != std::errc{} || ptr != fields[0].data() + fields[0].size()) {
            throw ParseError("csv line " + std::to_string(line_no) + ": bad x field '" +
                             std::string(fields[0]) + "'");
        }
        point.x = x;
        point.p_closed = parse_double(fields[1], line_no);
        point.p_mc = parse_double(fields[2], line_no);
        point.stderr_ = parse_double(fields[3], line_no);
        series.push_back(point);
    }
    return series;
}

} // namespace masmc
