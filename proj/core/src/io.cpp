#include "splab/io.hpp"

#include <bit>
#include <cmath>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace splab {

namespace {

void append_row(std::string& out, std::initializer_list<std::string> cells)
{
    bool first = true;
    for (const auto& c : cells) {
        if (!first) {
            out += ',';
        }
        out += c;
        first = false;
    }
    out += '\n';
}

std::string point_json(const Point& p, int dim)
{
    std::string s = "[";
    for (int i = 0; i < dim; ++i) {
        if (i > 0) {
            s += ',';
        }
        s += format_number(p.coords[i]);
    }
    return s + "]";
}

} // namespace

std::string format_number(double x)
{
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

std::string json_string(std::string_view s)
{
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"':
            out += "\\\"";
            break;
        case '\\':
            out += "\\\\";
            break;
        case '\n':
            out += "\\n";
            break;
        case '\t':
            out += "\\t";
            break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    return out + "\"";
}

void atomic_write(const std::filesystem::path& path, std::string_view content)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        }
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!f) {
            throw std::runtime_error("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw std::runtime_error("rename failed: " + path.string() + ": " + ec.message());
    }
}

std::string kernel_field_csv(const KernelField& field)
{
    const int n = field.dim;
    std::string out;
    std::string header;
    for (int i = 1; i <= n; ++i) {
        header += "u_" + std::to_string(i) + ",";
    }
    for (int i = 1; i <= n; ++i) {
        header += "v_" + std::to_string(i) + ",";
    }
    out += header + "alpha,beta,value\n";
    for (const auto& s : field.samples) {
        for (int i = 0; i < n; ++i) {
            out += format_number(s.u.comps[i]) + ",";
        }
        for (int i = 0; i < n; ++i) {
            out += format_number(s.v.comps[i]) + ",";
        }
        append_row(out, {format_multi_index(s.order.alpha, n), format_multi_index(s.order.beta, n),
                         format_number(s.value)});
    }
    return out;
}

std::string remainder_csv(const RemainderReport& report)
{
    std::string out = "lambda,sup_remainder\n";
    for (const auto& s : report.samples) {
        append_row(out, {format_number(s.lambda), format_number(s.value)});
    }
    return out;
}

std::string remainder_summary_json(const RemainderReport& report)
{
    std::string out = "{";
    out += "\"model\":" + json_string(report.model);
    out += ",\"x0\":" + point_json(report.x0, report.model == "sphere2" ? 3 : report.dim);
    out += ",\"alpha\":" + json_string(report.alpha);
    out += ",\"beta\":" + json_string(report.beta);
    out += ",\"alpha_hat\":" + format_number(report.fit.exponent);
    out += ",\"C_hat\":" + format_number(report.fit.prefactor);
    out += ",\"residual\":" + format_number(report.fit.residual);
    out += ",\"dropped_zeros\":" + std::to_string(report.fit.dropped_zeros);
    return out + "}";
}

std::string convergence_csv(const ConvergenceReport& report)
{
    std::string out = "lambda,alpha,beta,sup_error\n";
    for (const auto& r : report.rows) {
        append_row(out, {format_number(r.lambda), format_multi_index(r.alpha, report.dim),
                         format_multi_index(r.beta, report.dim), format_number(r.sup_error)});
    }
    return out;
}

std::string ensemble_summary_csv(const WaveEnsemble& ens)
{
    std::string out = "point_index,mean,variance,covariance_to_x0,stderr\n";
    for (std::size_t g = 0; g < ens.grid.size(); ++g) {
        const double mean = empirical_mean(ens, g);
        double var = 0.0;
        for (std::size_t i = 0; i < ens.samples; ++i) {
            const double d = ens.value(i, g) - mean;
            var += d * d;
        }
        var /= static_cast<double>(ens.samples);
        const auto cov = ens.samples >= 2 ? empirical_covariance(ens, 0, g) : CovarianceEstimate{};
        append_row(out, {std::to_string(g), format_number(mean), format_number(var),
                         format_number(cov.estimate), format_number(cov.standard_error)});
    }
    return out;
}

void write_ensemble_raw(const WaveEnsemble& ens, const std::filesystem::path& data,
                        const std::filesystem::path& header)
{
    std::string bytes;
    bytes.reserve(ens.values.size() * sizeof(double));
    for (double v : ens.values) {
        auto bits = std::bit_cast<std::uint64_t>(v);
        for (int b = 0; b < 8; ++b) {
            bytes += static_cast<char>((bits >> (8 * b)) & 0xFF);
        }
    }
    atomic_write(data, bytes);
    std::string h = "{";
    h += "\"dtype\":\"float64le\"";
    h += ",\"shape\":[" + std::to_string(ens.samples) + "," + std::to_string(ens.grid.size()) + "]";
    h += ",\"seed\":" + std::to_string(ens.seed);
    h += ",\"model\":" + json_string(ens.model);
    h += ",\"window\":[" + format_number(ens.window.lo()) + "," + format_number(ens.window.hi()) + "]";
    h += ",\"coefficients\":" + std::to_string(ens.coefficient_count);
    h += "}\n";
    atomic_write(header, h);
}

std::string loopset_csv(const LoopsetEstimate& est)
{
    std::string out = "direction_angle,first_return_time_or_-1,min_distance\n";
    for (const auto& r : est.results) {
        append_row(out, {format_number(r.angle), format_number(r.first_return_time),
                         format_number(r.min_distance)});
    }
    return out;
}

} // namespace splab
