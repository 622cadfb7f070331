#include "splab/io.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace splab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

fs::path scratch_dir(const std::string& name)
{
    auto dir = fs::temp_directory_path() / ("splab_io_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST(FormatNumber, RoundTripsExactly)
{
    for (int i = 0; i < 1000; ++i) {
        const double x = oracle::uniform(-1, 1) * std::pow(10.0, oracle::uniform(-300, 300));
        EXPECT_EQ(std::strtod(format_number(x).c_str(), nullptr), x);
    }
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(std::numbers::pi), "3.141592653589793");
    EXPECT_EQ(format_number(-1.0), "-1");
}

TEST(JsonString, Escapes)
{
    EXPECT_EQ(json_string("a\"b\\c\n"), "\"a\\\"b\\\\c\\n\"");
}

TEST(AtomicWrite, ReplacesContentWithoutLeftovers)
{
    const auto dir = scratch_dir("atomic");
    atomic_write(dir / "x.csv", "first\n");
    atomic_write(dir / "x.csv", "second\n");
    EXPECT_EQ(slurp(dir / "x.csv"), "second\n");
    EXPECT_FALSE(fs::exists(dir / "x.csv.tmp"));
    EXPECT_THROW(atomic_write(dir / "missing" / "y.csv", "z"), std::runtime_error);
}

TEST(KernelFieldCsv, HeaderAndRows)
{
    const auto offsets = offset_grid(2, 1.0, 2);
    DerivOrder d;
    d.alpha.e = {1, 0, 0};
    const std::vector<DerivOrder> orders{DerivOrder{}, d};
    const auto field = kernel_field(TorusModel(2), Point{}, 10.0, 1.0, true, offsets, PairMode::diagonal, orders);
    const auto csv = kernel_field_csv(field);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "u_1,u_2,v_1,v_2,alpha,beta,value");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
    }
    EXPECT_EQ(rows, 8);
    EXPECT_NE(csv.find(",1:0,0:0,"), std::string::npos);
}

TEST(ReportCsv, RemainderAndSummary)
{
    RemainderReport rep;
    rep.model = "torus2";
    rep.x0 = Point{};
    rep.alpha = "0:0";
    rep.beta = "0:0";
    rep.samples = {{25, 0.5}, {50, 0.25}};
    rep.fit.exponent = -1.0;
    rep.fit.prefactor = 12.5;
    EXPECT_EQ(remainder_csv(rep), "lambda,sup_remainder\n25,0.5\n50,0.25\n");
    const auto json = remainder_summary_json(rep);
    EXPECT_EQ(json, "{\"model\":\"torus2\",\"x0\":[0,0],\"alpha\":\"0:0\",\"beta\":\"0:0\",\"alpha_hat\":-1,"
                    "\"C_hat\":12.5,\"residual\":0,\"dropped_zeros\":0}");
}

TEST(ReportCsv, EnsembleSummaryAndRawDump)
{
    const std::vector<Point> grid{Point{}, Point{{0.1, 0.2, 0}}};
    const auto ens = sample_ensemble(TorusModel(2), SpectralWindow(3, 4), 50, 5, grid);
    const auto csv = ensemble_summary_csv(ens);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "point_index,mean,variance,covariance_to_x0,stderr");
    const auto dir = scratch_dir("raw");
    write_ensemble_raw(ens, dir / "s.bin", dir / "s.json");
    const auto bytes = slurp(dir / "s.bin");
    ASSERT_EQ(bytes.size(), 100 * sizeof(double));
    double first = 0.0;
    std::memcpy(&first, bytes.data(), sizeof first);
    EXPECT_EQ(first, ens.values[0]);
    const auto header = slurp(dir / "s.json");
    EXPECT_NE(header.find("\"shape\":[50,2]"), std::string::npos);
    EXPECT_NE(header.find("\"seed\":5"), std::string::npos);
    EXPECT_NE(header.find("\"window\":[3,4]"), std::string::npos);
}

TEST(ReportCsv, LoopsetAndConvergence)
{
    const auto est = loopset_fraction(RoundSphereSurface{}, Vec3{0, 0, 1}, 100, 7.0, 1e-3);
    const auto csv = loopset_csv(est);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "direction_angle,first_return_time_or_-1,min_distance");
    ConvergenceOptions opt;
    opt.max_alpha = 0;
    opt.max_beta = 0;
    opt.points_per_axis = 3;
    const std::vector<double> lambdas{40};
    const auto rep = convergence_report(TorusModel(2), Point{}, lambdas, opt);
    const auto conv = convergence_csv(rep);
    EXPECT_EQ(conv.substr(0, conv.find('\n')), "lambda,alpha,beta,sup_error");
    EXPECT_EQ(std::count(conv.begin(), conv.end(), '\n'), 2);
}
