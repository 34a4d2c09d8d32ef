#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

using cvqkd::cli::format_number;
using cvqkd::cli::run;
using cvqkd::cli::RunRecord;
using cvqkd::cli::SweepScale;
using cvqkd::cli::SweepSpec;
using json = nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        lines.push_back(line);
    }
    return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream in(line);
    std::string field;
    while (std::getline(in, field, ',')) {
        fields.push_back(field);
    }
    return fields;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("format_number: plain, locale-free, 15 significant digits") {
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333333");
    CHECK(format_number(0.001) == "0.001");
    CHECK(format_number(12345.0) == "12345");
}

TEST_CASE("sweep_grid: endpoints, scales and validation") {
    const auto lin = cvqkd::cli::sweep_grid({"eta", 0.1, 0.9, 5, SweepScale::linear});
    REQUIRE(lin.size() == 5);
    CHECK(lin.front() == 0.1);
    CHECK(lin.back() == 0.9);
    CHECK(lin[2] == doctest::Approx(0.5).epsilon(1e-15));

    const auto logg = cvqkd::cli::sweep_grid({"eta", 1e-3, 1.0, 4, SweepScale::log});
    CHECK(logg.front() == 1e-3);
    CHECK(logg.back() == 1.0);
    CHECK(logg[1] == doctest::Approx(1e-2).epsilon(1e-12));

    CHECK_THROWS_AS(cvqkd::cli::sweep_grid({"eta", 0.9, 0.1, 5, SweepScale::linear}),
                    std::invalid_argument);
    CHECK_THROWS_AS(cvqkd::cli::sweep_grid({"eta", 0.1, 0.9, 1, SweepScale::linear}),
                    std::invalid_argument);
    CHECK_THROWS_AS(cvqkd::cli::sweep_grid({"eta", -1.0, 0.9, 3, SweepScale::log}),
                    std::invalid_argument);
    CHECK_THROWS_AS(cvqkd::cli::sweep_grid({"volume", 0.1, 0.9, 3, SweepScale::linear}),
                    std::invalid_argument);
}

TEST_CASE("RunRecord: JSON round trip is lossless") {
    RunRecord rec;
    rec.eta = 0.123456789012345;
    rec.eta_db = 9.0951694642;
    rec.eps = 0.01;
    rec.nbar = 1.5;
    rec.m = 2.0;
    rec.mu = 17.25;
    rec.mode = "finite";
    rec.rate = -0.0123;
    rec.i_ab = 1.75;
    rec.holevo = 1.7623;
    rec.k = 3.0;
    rec.eta_eff = 0.0137174210013717;
    rec.eps_eff = 0.09;
    rec.mu_eff = 155.25;
    rec.plob = 0.19;
    rec.version = "0.1.0";
    rec.timestamp = "2026-01-01T00:00:00Z";

    CHECK(cvqkd::cli::run_record_from_json(cvqkd::cli::to_json_string(rec)) == rec);

    rec.mu.reset();
    rec.mu_eff.reset();
    rec.plob.reset();
    rec.mode = "asymptotic";
    CHECK(cvqkd::cli::run_record_from_json(cvqkd::cli::to_json_string(rec)) == rec);
}

TEST_CASE("rate: asymptotic record at 20 dB") {
    const Result res = invoke({"rate", "--eta-db", "20", "--nbar", "0"});
    REQUIRE(res.code == 0);
    const json doc = json::parse(res.out);
    CHECK(doc["inputs"]["mode"] == "asymptotic");
    CHECK(doc["inputs"]["mu"].is_null());
    CHECK(doc["inputs"]["eta"].get<double>() == doctest::Approx(0.01).epsilon(1e-12));
    const double rate = doc["outputs"]["rate"].get<double>();
    CHECK(std::abs(rate / 3.6e-3 - 1.0) < 0.05);
    CHECK(doc["outputs"]["k"].get<double>() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(doc["outputs"]["plob"].get<double>() > rate);

    // parse back through the typed record
    const RunRecord rec = cvqkd::cli::run_record_from_json(res.out);
    CHECK(rec.mode == "asymptotic");
    CHECK(cvqkd::cli::run_record_from_json(cvqkd::cli::to_json_string(rec)) == rec);
}

TEST_CASE("rate: finite record carries both information fields") {
    const Result res =
        invoke({"rate", "--eta", "0.5", "--m", "0", "--eps", "0", "--mu", "10"});
    REQUIRE(res.code == 0);
    const json doc = json::parse(res.out);
    CHECK(doc["inputs"]["mode"] == "finite");
    CHECK(doc["inputs"]["mu"].get<double>() == 10.0);
    CHECK(doc["outputs"]["i_ab"].get<double>() > 0.0);
    CHECK(doc["outputs"]["holevo"].get<double>() > 0.0);
    CHECK(doc["outputs"]["rate"].get<double>() ==
          doctest::Approx(doc["outputs"]["i_ab"].get<double>() -
                          doc["outputs"]["holevo"].get<double>()));
}

TEST_CASE("rate: exit codes") {
    // singular effective channel
    CHECK(invoke({"rate", "--eta", "1", "--m", "0"}).code == 3);
    // conflicting transmittance flags
    CHECK(invoke({"rate", "--eta", "0.5", "--eta-db", "3"}).code == 2);
    // missing transmittance
    CHECK(invoke({"rate", "--eps", "0.01"}).code == 2);
    // out-of-range value
    CHECK(invoke({"rate", "--eta", "1.5"}).code == 2);
    // unknown flag
    CHECK(invoke({"rate", "--eta", "0.5", "--bogus", "1"}).code == 2);
    // no subcommand
    CHECK(invoke({}).code == 2);
    // help is a success
    CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("sweep: header, row count and PLOB dominance") {
    const Result res = invoke({"sweep", "--var", "eta", "--start", "1e-3", "--stop", "0.9",
                               "--steps", "12", "--scale", "log", "--nbar", "1"});
    REQUIRE(res.code == 0);
    const auto lines = lines_of(res.out);
    REQUIRE(lines.size() == 13);
    CHECK(lines[0] == "eta,eta_db,nbar,m,eps,rate,plob,k,i_ab,holevo");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_csv(lines[i]);
        REQUIRE(fields.size() == 10);
        const double rate = std::stod(fields[5]);
        const double plob = std::stod(fields[6]);
        CHECK(plob >= rate);
        CHECK(std::stod(fields[2]) == 1.0);
    }

    const Result two = invoke({"sweep", "--var", "eta", "--start", "0.2", "--stop", "0.4",
                               "--steps", "2"});
    REQUIRE(two.code == 0);
    CHECK(lines_of(two.out).size() == 3);
}

TEST_CASE("sweep: family ordering in nbar") {
    std::vector<std::vector<double>> rates;
    for (const std::string nbar : {"0", "1", "3", "7"}) {
        const Result res = invoke({"sweep", "--var", "eta", "--start", "1e-3", "--stop", "0.9",
                                   "--steps", "8", "--scale", "log", "--nbar", nbar});
        REQUIRE(res.code == 0);
        std::vector<double> column;
        const auto lines = lines_of(res.out);
        for (std::size_t i = 1; i < lines.size(); ++i) {
            column.push_back(std::stod(split_csv(lines[i])[5]));
        }
        rates.push_back(column);
    }
    for (std::size_t family = 1; family < rates.size(); ++family) {
        for (std::size_t row = 0; row < rates[family].size(); ++row) {
            CHECK(rates[family][row] < rates[family - 1][row]);
        }
    }
}

TEST_CASE("sweep: negative rates are emitted as-is") {
    const Result res = invoke({"sweep", "--var", "eps", "--start", "0", "--stop", "0.5",
                               "--steps", "6", "--eta", "0.01", "--nbar", "1"});
    REQUIRE(res.code == 0);
    const auto lines = lines_of(res.out);
    CHECK(std::stod(split_csv(lines.back())[5]) < 0.0);
}

TEST_CASE("sweep: usage errors exit 2") {
    CHECK(invoke({"sweep", "--var", "eta", "--start", "0.9", "--stop", "0.1", "--steps", "5"})
              .code == 2);
    CHECK(invoke({"sweep", "--var", "eta", "--start", "0.1", "--stop", "0.9"}).code == 2);
    CHECK(invoke({"sweep", "--var", "eps", "--start", "0", "--stop", "0.5", "--steps", "4"})
              .code == 2);  // needs --eta
    CHECK(invoke({"sweep", "--var", "eta", "--start", "0.1", "--stop", "0.9", "--steps", "4",
                  "--scale", "cubic"})
              .code == 2);
}

TEST_CASE("threshold: anchor rows and curve ordering") {
    const Result clean = invoke({"threshold", "--db-start", "20", "--db-stop", "20", "--steps",
                                 "1", "--m", "0"});
    REQUIRE(clean.code == 0);
    auto lines = lines_of(clean.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "eta_db,eta,nbar,m,eps_max,no_threshold");
    auto fields = split_csv(lines[1]);
    REQUIRE(fields.size() == 6);
    CHECK(std::abs(std::stod(fields[4]) - 0.12) < 0.01);
    CHECK(fields[5] == "0");

    const Result hacked = invoke({"threshold", "--db-start", "20", "--db-stop", "20", "--steps",
                                  "1", "--nbar", "1"});
    REQUIRE(hacked.code == 0);
    fields = split_csv(lines_of(hacked.out)[1]);
    CHECK(std::abs(std::stod(fields[4]) - 0.03) < 0.01);

    // three curves on a shared grid stay pointwise ordered
    std::vector<std::vector<double>> curves;
    for (const auto& flags : std::vector<std::vector<std::string>>{
             {"--m", "0"}, {"--nbar", "0"}, {"--nbar", "1"}}) {
        std::vector<std::string> args{"threshold", "--db-start", "5", "--db-stop", "30",
                                      "--steps", "6"};
        args.insert(args.end(), flags.begin(), flags.end());
        const Result res = invoke(args);
        REQUIRE(res.code == 0);
        std::vector<double> eps;
        const auto body = lines_of(res.out);
        for (std::size_t i = 1; i < body.size(); ++i) {
            eps.push_back(std::stod(split_csv(body[i])[4]));
        }
        curves.push_back(eps);
    }
    for (std::size_t row = 0; row < curves[0].size(); ++row) {
        CHECK(curves[0][row] > curves[1][row]);
        CHECK(curves[1][row] > curves[2][row]);
    }

    CHECK(invoke({"threshold", "--db-start", "30", "--db-stop", "5", "--steps", "4"}).code == 2);
}

TEST_CASE("verify: default grid passes, tight tolerance fails") {
    const Result all = invoke({"verify"});
    CHECK(all.code == 0);
    CHECK(all.out.find("theta1=") != std::string::npos);
    CHECK(all.out.find("verification passed") != std::string::npos);

    const Result degenerate = invoke({"verify", "--nbar", "0", "--m", "1"});
    CHECK(degenerate.code == 0);
    CHECK(degenerate.out.find("theta1=0.785398163397448") != std::string::npos);
    CHECK(degenerate.out.find("r2=0") != std::string::npos);
    CHECK(degenerate.out.find("r3=0") != std::string::npos);

    const Result impossible = invoke({"verify", "--tol", "1e-30"});
    CHECK(impossible.code == 1);
    CHECK(impossible.out.find("verification FAILED") != std::string::npos);
}

TEST_CASE("simulate: reproducible output and sane estimates") {
    const std::vector<std::string> args{"simulate", "--mu", "10",      "--eta",  "0.5",
                                        "--eps",    "0.05", "--samples", "200000", "--seed", "77"};
    const Result first = invoke(args);
    const Result second = invoke(args);
    REQUIRE(first.code == 0);
    CHECK(first.out == second.out);

    const json doc = json::parse(first.out);
    CHECK(doc["sample_count"].get<std::size_t>() == 200000);
    CHECK(std::abs(doc["eta_hat"].get<double>() - 0.5) < 3.0 * doc["se_eta"].get<double>());
    CHECK(std::abs(doc["eps_hat"].get<double>() - 0.05) < 3.0 * doc["se_eps"].get<double>());

    CHECK(invoke({"simulate", "--mu", "10", "--eta", "0.5", "--samples", "0"}).code == 2);
    CHECK(invoke({"simulate", "--mu", "10", "--samples", "100"}).code == 2);
}

TEST_CASE("simulate: sample dump file") {
    const auto path = temp_file("cvqkd_test_samples.csv");
    std::filesystem::remove(path);
    const Result res = invoke({"simulate", "--mu", "4", "--eta", "0.9", "--samples", "150",
                               "--seed", "3", "--dump-samples", path.string()});
    REQUIRE(res.code == 0);
    std::ifstream file(path);
    REQUIRE(file.good());
    std::string header;
    std::getline(file, header);
    CHECK(header == "alpha_x,alpha_p,beta_x,beta_p");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(file, line)) {
        if (!line.empty()) {
            CHECK(split_csv(line).size() == 4);
            ++rows;
        }
    }
    CHECK(rows == 150);
    std::filesystem::remove(path);
}

TEST_CASE("config file: values load and flags override") {
    const auto path = temp_file("cvqkd_test_config.txt");
    {
        std::ofstream file(path);
        file << "# threshold point\n";
        file << "eta=0.25\n";
        file << "nbar=1\n";
    }

    const Result from_file = invoke({"rate", "--config", path.string()});
    REQUIRE(from_file.code == 0);
    json doc = json::parse(from_file.out);
    CHECK(doc["inputs"]["eta"].get<double>() == 0.25);
    CHECK(doc["inputs"]["nbar"].get<double>() == 1.0);

    const Result overridden = invoke({"rate", "--config", path.string(), "--eta", "0.5"});
    REQUIRE(overridden.code == 0);
    doc = json::parse(overridden.out);
    CHECK(doc["inputs"]["eta"].get<double>() == 0.5);
    CHECK(doc["inputs"]["nbar"].get<double>() == 1.0);

    std::filesystem::remove(path);
}
