#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <entqp/matrix_io.hpp>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct ScratchDir {
    fs::path path;
    ScratchDir() : path(fs::temp_directory_path() /
                        ("entqp_cli_test_" + std::to_string(::getpid()))) {
        fs::create_directories(path);
    }
    ~ScratchDir() { fs::remove_all(path); }
};

ScratchDir scratch;

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path out_path = scratch.path / ("stdout_" + std::to_string(counter));
    const fs::path err_path = scratch.path / ("stderr_" + std::to_string(counter));
    ++counter;
    const std::string command = std::string(ENTQP_CLI_PATH) + " " + args + " > " +
                                out_path.string() + " 2> " + err_path.string();
    const int status = std::system(command.c_str());
    RunResult result;
    result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = read_file(out_path);
    result.err = read_file(err_path);
    return result;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty())
            lines.push_back(line);
    return lines;
}

std::vector<std::string> fields_of(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream in(line);
    std::string field;
    while (std::getline(in, field, ','))
        fields.push_back(field);
    return fields;
}

} // namespace

TEST_CASE("analyze writes the benchmark report to stdout") {
    const auto run = run_cli("analyze --zeta 0.62 --sigma 2 --dim 2");
    REQUIRE(run.code == 0);
    const json report = json::parse(run.out);

    CHECK(report["state_meta"]["dim"] == 2);
    CHECK(report["state_meta"]["zeta"].get<double>() == doctest::Approx(0.62));
    CHECK(report["state_meta"]["sigma"].get<double>() == doctest::Approx(2.0));
    CHECK(report["state_meta"]["source"] == "dephased_tmsv");

    REQUIRE(report["solutions"].size() == 6);
    CHECK(report["solutions"][0]["k"] == 1);
    CHECK(report["solutions"][2]["g"].get<double>() ==
          doctest::Approx(0.1909464872536456).epsilon(1e-12));
    CHECK(report["solutions"][4]["g"].get<double>() ==
          doctest::Approx(0.14965863384153963).epsilon(1e-12));

    REQUIRE(report["weights"].size() == 6);
    CHECK(report["weights"][4].get<double>() ==
          doctest::Approx(-0.061294525097954085).epsilon(1e-12));
    CHECK(report["min_weight"].get<double>() ==
          doctest::Approx(-0.061294525097954085).epsilon(1e-12));
    CHECK(report["negative_indices"] == json::array({5, 6}));
    CHECK(report["sum_weights"].get<double>() == doctest::Approx(0.85223664).epsilon(1e-12));
    CHECK(report["trace"].get<double>() == doctest::Approx(0.85223664).epsilon(1e-14));
    CHECK(report["epsilon"].get<double>() < 1e-12);
    CHECK(report["gram_residual"].get<double>() < 1e-12);
    CHECK(report["ppt"]["min_eigenvalue"].get<double>() ==
          doctest::Approx(-0.051653688223484429).epsilon(1e-12));
    CHECK(report["ppt"]["entangled"] == true);
}

TEST_CASE("identical invocations produce byte-identical files") {
    const auto first = scratch.path / "det1.json";
    const auto second = scratch.path / "det2.json";
    REQUIRE(run_cli("analyze --zeta 0.62 --sigma 2 --out " + first.string()).code == 0);
    REQUIRE(run_cli("analyze --zeta 0.62 --sigma 2 --out " + second.string()).code == 0);
    const auto bytes = read_file(first);
    CHECK_FALSE(bytes.empty());
    CHECK(bytes == read_file(second));
}

TEST_CASE("flag-built and file-loaded states give identical reports") {
    const auto state =
        entqp::state_model::apply_dephasing(entqp::state_model::build_tmsv(0.62, 2), 2.0);
    const auto matrix_path = scratch.path / "state.json";
    entqp::state_model::save_matrix(state, matrix_path);

    const auto from_flags = scratch.path / "flags.json";
    const auto from_file = scratch.path / "file.json";
    REQUIRE(run_cli("analyze --zeta 0.62 --sigma 2 --out " + from_flags.string()).code == 0);
    REQUIRE(run_cli("analyze --input " + matrix_path.string() + " --out " +
                    from_file.string()).code == 0);
    CHECK(read_file(from_flags) == read_file(from_file));
}

TEST_CASE("the decibel flag maps to the equivalent squeezing parameter") {
    const auto run = run_cli("analyze --db 6.3 --sigma 2");
    REQUIRE(run.code == 0);
    const json report = json::parse(run.out);
    const double zeta = report["state_meta"]["zeta"].get<double>();
    CHECK(zeta == doctest::Approx(0.62).epsilon(5e-3));
}

TEST_CASE("usage mistakes exit with 64") {
    CHECK(run_cli("analyze --frobnicate").code == 64);
    CHECK(run_cli("analyze --zeta 0.5 --db 3").code == 64);
    CHECK(run_cli("analyze --sigma 1,2").code == 64);
    CHECK(run_cli("analyze --format xml").code == 64);
    CHECK(run_cli("analyze --zeta 1.2").code == 64);
    CHECK(run_cli("analyze --sigma -1").code == 64);
    CHECK(run_cli("analyze --emit report,quasiprob").code == 64);
    CHECK(run_cli("").code == 64);

    const auto state = entqp::state_model::build_tmsv(0.62, 2);
    const auto path = scratch.path / "dim2.csv";
    entqp::state_model::save_matrix(state, path);
    const auto mismatch = run_cli("analyze --input " + path.string() + " --dim 3");
    CHECK(mismatch.code == 64);
    CHECK(mismatch.err.find("error:") != std::string::npos);
}

TEST_CASE("runtime failures exit with 1 and explain themselves") {
    const auto missing = run_cli("analyze --input " + (scratch.path / "nope.json").string());
    CHECK(missing.code == 1);
    CHECK(missing.err.find("nope.json") != std::string::npos);

    const auto delta = run_cli("phase-dist --sigma 0");
    CHECK(delta.code == 1);
    CHECK(delta.err.find("point mass") != std::string::npos);

    const auto too_big = run_cli("analyze --dim 9");
    CHECK(too_big.code == 1);
    CHECK(too_big.err.find("488281") != std::string::npos);

    const auto capped = run_cli("analyze --dim 3 --max-dim 2");
    CHECK(capped.code == 1);
}

TEST_CASE("help is not an error") {
    CHECK(run_cli("--help").code == 0);
    CHECK(run_cli("analyze --help").code == 0);
}

TEST_CASE("inexact decompositions exit with 2") {
    CHECK(run_cli("analyze --zeta 0.62 --sigma 0").code == 2);
    CHECK(run_cli("analyze --zeta 0.62 --sigma 0.5").code == 2);
    // A deliberately crippled rank cutoff degrades the reconstruction.
    CHECK(run_cli("analyze --zeta 0.62 --sigma 2 --rank-cutoff 0.9").code == 2);
}

TEST_CASE("sweep tabulates one row per sigma in input order") {
    const auto csv_path = scratch.path / "sweep.csv";
    const auto run =
        run_cli("sweep --zeta 0.62 --sigma 0,0.5,2,5 --dim 2 --out " + csv_path.string());
    CHECK(run.code == 2); // the sigma = 0 and 0.5 rows are inexact

    const auto lines = lines_of(read_file(csv_path));
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == "sigma,min_weight,epsilon,ppt_min_eig");
    const auto row2 = fields_of(lines[3]);
    REQUIRE(row2.size() == 4);
    CHECK(std::stod(row2[0]) == 2.0);
    CHECK(std::stod(row2[1]) == doctest::Approx(-0.061294525097954085).epsilon(1e-12));
    CHECK(std::stod(row2[2]) < 1e-12);
    CHECK(std::stod(row2[3]) == doctest::Approx(-0.051653688223484429).epsilon(1e-12));
    const auto row3 = fields_of(lines[4]);
    CHECK(std::stod(row3[1]) == doctest::Approx(-1.772916872769259e-06).epsilon(1e-9));

    // Rows follow the flag order, not numeric order.
    const auto reversed = run_cli("sweep --zeta 0.62 --sigma 5,2");
    CHECK(reversed.code == 0);
    const auto rev_lines = lines_of(reversed.out);
    REQUIRE(rev_lines.size() == 3);
    CHECK(std::stod(fields_of(rev_lines[1])[0]) == 5.0);
    CHECK(std::stod(fields_of(rev_lines[2])[0]) == 2.0);
}

TEST_CASE("phase-dist tabulates the wrapped Gaussian density") {
    const auto run = run_cli("phase-dist --sigma 0.5 --samples 256");
    REQUIRE(run.code == 0);
    const auto lines = lines_of(run.out);
    REQUIRE(lines.size() == 257);
    CHECK(lines[0] == "phi,pdf");

    const auto first = fields_of(lines[1]);
    CHECK(std::stod(first[0]) == 0.0);
    CHECK(std::stod(first[1]) == doctest::Approx(0.79788456080286541).epsilon(1e-12));

    // Periodic trapezoid normalization.
    double mass = 0.0;
    for (size_t i = 1; i < lines.size(); ++i)
        mass += std::stod(fields_of(lines[i])[1]);
    mass *= 2.0 * 3.14159265358979324 / 256;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("strong dephasing flattens the tabulated density") {
    const auto run = run_cli("phase-dist --sigma 5 --samples 512");
    REQUIRE(run.code == 0);
    const auto lines = lines_of(run.out);
    REQUIRE(lines.size() == 513);
    double lo = 1e300, hi = 0.0;
    for (size_t i = 1; i < lines.size(); ++i) {
        const double value = std::stod(fields_of(lines[i])[1]);
        lo = std::min(lo, value);
        hi = std::max(hi, value);
    }
    CHECK(hi / lo < 1.01);
}

TEST_CASE("multi-artifact emission derives one file per artifact") {
    const auto base = scratch.path / "bundle";
    const auto run = run_cli("analyze --zeta 0.62 --sigma 2 --emit report,solutions,quasiprob "
                             "--out " + base.string());
    REQUIRE(run.code == 0);
    CHECK(run.out.empty());

    const auto report = json::parse(read_file(base.string() + ".report.json"));
    CHECK(report["min_weight"].get<double>() < 0.0);

    const auto solutions = json::parse(read_file(base.string() + ".solutions.json"));
    REQUIRE(solutions.size() == 6);
    CHECK(solutions[0]["k"] == 1);
    CHECK(solutions[5]["k"] == 6);
    CHECK(solutions[2]["support"] == json::array({0, 1}));
    CHECK(solutions[2]["a_re"].size() == 2);
    CHECK(solutions[2]["a_im"].size() == 2);
    CHECK(solutions[2]["residual"].get<double>() <= 1e-9);

    const auto table = lines_of(read_file(base.string() + ".quasiprob.csv"));
    REQUIRE(table.size() == 7);
    CHECK(table[0] == "k,support,e,root_signs,g,p");
    const auto row = fields_of(table[3]);
    REQUIRE(row.size() == 6);
    CHECK(row[0] == "3");
    CHECK(row[1] == "0;1");
    CHECK(row[2] == "++");
    CHECK(row[3] == "++");
    CHECK(std::stod(row[4]) == doctest::Approx(0.1909464872536456).epsilon(1e-12));
}

TEST_CASE("the csv format selects the quasiprobability table by default") {
    const auto run = run_cli("analyze --zeta 0.62 --sigma 2 --format csv");
    REQUIRE(run.code == 0);
    const auto lines = lines_of(run.out);
    REQUIRE(lines.size() == 7);
    CHECK(lines[0] == "k,support,e,root_signs,g,p");
    CHECK(fields_of(lines[1])[0] == "1");
}

TEST_CASE("phase_dist can ride along an analyze run") {
    const auto base = scratch.path / "with_phase";
    const auto run = run_cli("analyze --zeta 0.62 --sigma 2 --emit report,phase_dist "
                             "--samples 64 --out " + base.string());
    REQUIRE(run.code == 0);
    const auto phase = lines_of(read_file(base.string() + ".phase.csv"));
    CHECK(phase.size() == 65);

    // ... but not for the undephased state, whose distribution is a point mass.
    const auto bad = run_cli("analyze --zeta 0.62 --sigma 0 --emit phase_dist");
    CHECK(bad.code == 1);
}
