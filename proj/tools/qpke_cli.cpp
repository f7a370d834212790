// Copyright 2026 The qpke-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qpke: sweeps, figure data and inequality checks for the rotation-based
// quantum public-key scheme.
//
// Exit codes: 0 every check passed, 1 at least one violation (listed as JSON
// on stderr), 2 usage error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qpke/checks.hpp"
#include "qpke/commands.hpp"

namespace {

constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

std::vector<std::string> split(const std::string &text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

int parse_int(const std::string &s) {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) {
        throw std::invalid_argument("not an integer: " + s);
    }
    return v;
}

/// "4", "1:8" (inclusive) or "2,4,8"; pieces may be mixed: "1:3,8".
std::vector<int> parse_int_range(const std::string &text) {
    std::vector<int> out;
    for (const auto &piece : split(text, ',')) {
        const auto bounds = split(piece, ':');
        if (bounds.size() == 1) {
            out.push_back(parse_int(bounds[0]));
        } else if (bounds.size() == 2) {
            const int lo = parse_int(bounds[0]);
            const int hi = parse_int(bounds[1]);
            if (hi < lo) {
                throw std::invalid_argument("empty range: " + piece);
            }
            for (int i = lo; i <= hi; ++i) {
                out.push_back(i);
            }
        } else {
            throw std::invalid_argument("bad range: " + piece);
        }
    }
    return out;
}

std::optional<int> power_of_two_exponent(const std::string &s) {
    if (s.rfind("2^", 0) != 0) {
        return std::nullopt;
    }
    return parse_int(s.substr(2));
}

/// Decimal values or powers of two: "0.01", "2^-5", "2^-3:2^-10".
std::vector<double> parse_epsilons(const std::string &text) {
    std::vector<double> out;
    for (const auto &piece : split(text, ',')) {
        const auto bounds = split(piece, ':');
        if (bounds.size() == 2) {
            const auto a = power_of_two_exponent(bounds[0]);
            const auto b = power_of_two_exponent(bounds[1]);
            if (!a || !b) {
                throw std::invalid_argument("epsilon ranges must be written 2^a:2^b");
            }
            const int step = *a <= *b ? 1 : -1;
            for (int e = *a;; e += step) {
                out.push_back(std::ldexp(1.0, e));
                if (e == *b) {
                    break;
                }
            }
        } else if (bounds.size() == 1) {
            if (const auto e = power_of_two_exponent(piece)) {
                out.push_back(std::ldexp(1.0, *e));
            } else {
                std::size_t used = 0;
                out.push_back(std::stod(piece, &used));
                if (used != piece.size()) {
                    throw std::invalid_argument("not a number: " + piece);
                }
            }
        } else {
            throw std::invalid_argument("bad epsilon list: " + piece);
        }
    }
    return out;
}

struct OutputOptions {
    std::string out;
    std::string format = "csv";
};

int emit(const qpke::Report &report, const OutputOptions &o) {
    std::ofstream file;
    std::ostream *os = &std::cout;
    if (!o.out.empty() && o.out != "-") {
        file.open(o.out);
        if (!file) {
            std::cerr << "qpke: cannot open " << o.out << " for writing\n";
            return kExitUsage;
        }
        os = &file;
    }
    if (o.format == "json") {
        qpke::write_json(*os, report.table);
    } else {
        qpke::write_csv(*os, report.table);
    }
    if (!report.ok()) {
        nlohmann::ordered_json j;
        j["violations"] = qpke::to_json(report.violations);
        std::cerr << j.dump(2) << '\n';
        return kExitViolation;
    }
    return 0;
}

void add_output_flags(CLI::App *cmd, OutputOptions &o) {
    cmd->add_option("--out", o.out, "Output file (default: stdout)");
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Numerical checks for the single-qubit-rotation quantum public-key scheme"};
    app.require_subcommand(1);

    OutputOptions output;

    // prior
    std::string prior_tau = "1,2,4,8,16";
    std::string prior_n = "1:6,8,10";
    auto *prior = app.add_subcommand("prior", "Prior density operators: entropy, rank, spectrum, Holevo bounds");
    prior->add_option("--tau", prior_tau, "Copies: value, a:b or list (1..64)");
    prior->add_option("--n", prior_n, "Resolution exponents: value, a:b or list (1..20)");
    add_output_flags(prior, output);

    // figure
    int figure_id = 1;
    int figure_n = 10;
    std::string figure_T;
    std::string figure_s;
    auto *figure = app.add_subcommand("figure", "Data behind figures 1-5");
    figure->add_option("--id", figure_id, "Figure number 1..5")->required()->check(CLI::Range(1, 5));
    figure->add_option("--n", figure_n, "Resolution exponent (1..14)");
    figure->add_option("--T", figure_T, "Measurements per basis: value, a:b or list");
    figure->add_option("--s", figure_s, "Codeword lengths for figure 5");
    add_output_flags(figure, output);

    // security
    std::string security_eps = "2^-3:2^-10";
    std::string security_T = "2:8";
    auto *security = app.add_subcommand("security", "Codeword lengths needed for a security parameter epsilon");
    security->add_option("--epsilon", security_eps, "Values in (0, 1/2]: 0.01, 2^-5, or 2^-3:2^-10");
    security->add_option("--T", security_T, "Measurements per basis (> 1)");
    add_output_flags(security, output);

    // montecarlo
    std::string mc_attack = "symmetry-test";
    std::string mc_s = "1";
    qpke::MonteCarloOptions mc;
    auto *montecarlo = app.add_subcommand("montecarlo", "Simulated protocol runs against the analytic success");
    montecarlo->add_option("--attack", mc_attack, "Attack")
        ->check(CLI::IsMember({"symmetry-test", "bayes-projective"}));
    montecarlo->add_option("--n", mc.n, "Resolution exponent");
    montecarlo->add_option("--N", mc.N, "Public-key length (defaults to s; must be >= s)");
    montecarlo->add_option("--T", mc.T, "Measurements per basis (bayes-projective)");
    montecarlo->add_option("--s", mc_s, "Codeword lengths: value, a:b or list");
    montecarlo->add_option("--trials", mc.trials, "Trials per codeword length");
    montecarlo->add_option("--seed", mc.seed, "Master seed");
    montecarlo->add_option("--threads", mc.threads, "Worker threads")->check(CLI::PositiveNumber);
    add_output_flags(montecarlo, output);

    // check-all
    auto *check_all = app.add_subcommand("check-all", "Run every reproduction check");
    add_output_flags(check_all, output);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*prior) {
            return emit(qpke::cmd_prior({parse_int_range(prior_tau), parse_int_range(prior_n)}), output);
        }
        if (*figure) {
            qpke::FigureOptions opt;
            opt.id = figure_id;
            opt.n = figure_n;
            if (!figure_T.empty()) {
                opt.Ts = parse_int_range(figure_T);
            }
            if (!figure_s.empty()) {
                opt.ss = parse_int_range(figure_s);
            }
            return emit(qpke::cmd_figure(opt), output);
        }
        if (*security) {
            return emit(qpke::cmd_security({parse_epsilons(security_eps), parse_int_range(security_T)}), output);
        }
        if (*montecarlo) {
            mc.attack = mc_attack == "bayes-projective" ? qpke::AttackKind::BayesProjective
                                                        : qpke::AttackKind::SymmetryTest;
            mc.ss = parse_int_range(mc_s);
            if (mc.trials < 100) {
                std::cerr << "qpke: warning: " << mc.trials << " trials give unreliable standard errors\n";
            }
            return emit(qpke::cmd_montecarlo(mc), output);
        }
        if (*check_all) {
            std::vector<qpke::checks::CheckResult> results;
            for (const auto &check : qpke::checks::all_checks()) {
                results.push_back(check());
                const auto &r = results.back();
                std::cerr << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << " ("
                          << qpke::format_number(r.seconds) << " s): " << r.detail << '\n';
            }
            return emit(qpke::checks::run_all(results), output);
        }
    } catch (const std::invalid_argument &e) {
        std::cerr << "qpke: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::out_of_range &e) {
        std::cerr << "qpke: value out of range: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
