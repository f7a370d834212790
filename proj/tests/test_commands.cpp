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


#include "qpke/commands.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"

using namespace qpke;

namespace {

double num(const Table &t, std::size_t row, std::string_view col) {
    const Cell &c = t.rows.at(row).at(t.column(col));
    if (const auto *d = std::get_if<double>(&c)) {
        return *d;
    }
    return static_cast<double>(std::get<long long>(c));
}

} // namespace

TEST(Format, numbers_use_twelve_significant_digits) {
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
    EXPECT_EQ(format_number(1e-20), "1e-20");
    EXPECT_EQ(format_number(-2.5), "-2.5");
    EXPECT_EQ(format_number(std::nan("")), "nan");
    EXPECT_EQ(format_number(-INFINITY), "-inf");
    const std::vector<double> v{0.5, 0.25};
    EXPECT_EQ(format_list(v), "0.5;0.25");
}

TEST(Format, csv_quoting_and_layout) {
    Table t;
    t.columns = {"a", "b", "c", "d"};
    t.add_row({1LL, 0.5, std::string("x,y"), true});
    t.add_row({-2LL, 1e300, std::string("say \"hi\""), false});
    std::ostringstream os;
    write_csv(os, t);
    EXPECT_EQ(os.str(), "a,b,c,d\n1,0.5,\"x,y\",true\n-2,1e+300,\"say \"\"hi\"\"\",false\n");
    EXPECT_EQ(t.column("c"), 2u);
    EXPECT_THROW((void)t.column("zz"), std::out_of_range);
}

TEST(Format, json_mirrors_rows) {
    Table t;
    t.columns = {"T", "value", "label"};
    t.add_row({3LL, std::nan(""), std::string("z")});
    t.add_row({4LL, 0.25, std::string("w")});
    const auto j = to_json(t);
    ASSERT_EQ(j.size(), 2u);
    EXPECT_EQ(j[0]["T"], 3);
    EXPECT_TRUE(j[0]["value"].is_null());
    EXPECT_EQ(j[1]["value"], 0.25);
    EXPECT_EQ(j[1]["label"], "w");
    const auto v = to_json(std::vector<Violation>{{"check", "detail"}});
    EXPECT_EQ(v[0]["check"], "check");
}

TEST(CmdPrior, example_rows) {
    PriorOptions opt;
    opt.taus = {1, 4};
    opt.ns = {1, 3, 6};
    const Report r = cmd_prior(opt);
    EXPECT_TRUE(r.ok());
    ASSERT_EQ(r.table.rows.size(), 6u);
    for (std::size_t i = 0; i < r.table.rows.size(); ++i) {
        const double tau = num(r.table, i, "tau");
        EXPECT_LE(num(r.table, i, "entropy_bits"), std::log2(tau + 1) + 1e-12);
        if (tau == 1) {
            EXPECT_NEAR(num(r.table, i, "entropy_bits"), 1.0, 1e-12);
        }
    }
    // tau = 4, n = 6 is above n_c = 3.
    const std::size_t row = 5;
    EXPECT_EQ(num(r.table, row, "n_c"), 3);
    EXPECT_EQ(std::get<bool>(r.table.rows[row][r.table.column("at_or_above_n_c")]), true);
    EXPECT_EQ(std::get<std::string>(r.table.rows[row][r.table.column("spectrum")]), "0.375;0.25;0.25;0.0625;0.0625");
}

TEST(CmdPrior, large_tau_is_consistent) {
    PriorOptions opt;
    opt.taus = {40};
    opt.ns = {7};
    EXPECT_TRUE(cmd_prior(opt).ok());
}

TEST(CmdPrior, rejects_out_of_range) {
    PriorOptions opt;
    opt.taus = {65};
    EXPECT_THROW(cmd_prior(opt), std::invalid_argument);
    opt.taus = {2};
    opt.ns = {21};
    EXPECT_THROW(cmd_prior(opt), std::invalid_argument);
}

TEST(CmdFigure, posteriors_sum_to_one) {
    FigureOptions opt;
    opt.id = 1;
    opt.n = 6;
    opt.Ts = {2};
    const Report r = cmd_figure(opt);
    EXPECT_TRUE(r.ok());
    std::map<std::pair<long long, long long>, double> sums;
    for (std::size_t i = 0; i < r.table.rows.size(); ++i) {
        sums[{static_cast<long long>(num(r.table, i, "T0z")), static_cast<long long>(num(r.table, i, "T0x"))}] +=
            num(r.table, i, "probability");
    }
    EXPECT_EQ(sums.size(), 9u);
    for (const auto &[key, total] : sums) {
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(CmdFigure, information_gap_positive) {
    FigureOptions opt;
    opt.id = 2;
    opt.n = 8;
    opt.Ts = {1, 2, 4};
    const Report r = cmd_figure(opt);
    EXPECT_TRUE(r.ok());
    for (std::size_t i = 0; i < r.table.rows.size(); ++i) {
        EXPECT_GT(num(r.table, i, "gap"), 0.0);
    }
}

TEST(CmdFigure, success_vs_key_and_T) {
    FigureOptions opt;
    opt.id = 3;
    opt.n = 3;
    opt.Ts = {2};
    const Report r3 = cmd_figure(opt);
    ASSERT_EQ(r3.table.rows.size(), 8u);
    EXPECT_NEAR(num(r3.table, 1, "success"), 0.890165042944955, 1e-12);
    EXPECT_NEAR(num(r3.table, 0, "mean_success"), 0.908470869120796, 1e-12);

    opt.id = 4;
    opt.n = 10;
    opt.Ts = {1, 4};
    const Report r4 = cmd_figure(opt);
    EXPECT_TRUE(r4.ok());
    EXPECT_TRUE(std::isnan(num(r4.table, 0, "bound_U")));
    EXPECT_NEAR(num(r4.table, 1, "mean_success"), 0.955538136436905, 1e-12);
}

TEST(CmdFigure, codeword_below_bound) {
    FigureOptions opt;
    opt.id = 5;
    opt.n = 8;
    opt.Ts = {2, 3};
    opt.ss = {1, 5, 20};
    const Report r = cmd_figure(opt);
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.table.rows.size(), 6u);
    for (std::size_t i = 0; i < r.table.rows.size(); ++i) {
        EXPECT_LE(num(r.table, i, "codeword_success"), num(r.table, i, "codeword_bound") + 1e-10);
    }
}

TEST(CmdFigure, rejects_bad_arguments) {
    FigureOptions opt;
    opt.id = 6;
    EXPECT_THROW(cmd_figure(opt), std::invalid_argument);
    opt.id = 1;
    opt.n = 15;
    EXPECT_THROW(cmd_figure(opt), std::invalid_argument);
    opt.id = 5;
    opt.n = 4;
    opt.Ts = {1};
    EXPECT_THROW(cmd_figure(opt), std::invalid_argument);
}

TEST(CmdSecurity, example_rows) {
    SecurityOptions opt;
    opt.epsilons = {std::ldexp(1.0, -5), 0.5};
    opt.Ts = {2};
    const Report r = cmd_security(opt);
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(num(r.table, 0, "s_simple"), 24);
    EXPECT_EQ(num(r.table, 0, "s_exact"), 16);
    EXPECT_EQ(num(r.table, 0, "forward_search"), 8);
    EXPECT_EQ(num(r.table, 0, "ratio"), 3.0);
    for (auto col : {"s_exact", "s_simple", "forward_search", "ratio"}) {
        EXPECT_EQ(num(r.table, 1, col), 0.0) << col;
    }
}

TEST(CmdSecurity, default_sweep_passes) {
    const Report r = cmd_security({});
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.table.rows.size(), 8u * 7u);
}

TEST(CmdMontecarlo, example_rows) {
    MonteCarloOptions opt;
    opt.attack = AttackKind::BayesProjective;
    opt.n = 1;
    opt.T = 1;
    opt.ss = {1, 2};
    opt.trials = 1000;
    const Report r = cmd_montecarlo(opt);
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(num(r.table, 0, "empirical"), 1.0);
    EXPECT_EQ(num(r.table, 1, "z"), 0.0);

    MonteCarloOptions sym;
    sym.trials = 20000;
    sym.seed = 5;
    const Report a = cmd_montecarlo(sym);
    const Report b = cmd_montecarlo(sym);
    EXPECT_EQ(num(a.table, 0, "empirical"), num(b.table, 0, "empirical"));
    EXPECT_EQ(num(a.table, 0, "analytic"), 0.75);
    EXPECT_EQ(std::get<std::string>(a.table.rows[0][0]), "symmetry-test");
}

TEST(CmdMontecarlo, flags_mismatch_as_violation) {
    MonteCarloOptions opt;
    opt.trials = 20000;
    opt.z_limit = 0.0; // any estimate fails a zero tolerance
    const Report r = cmd_montecarlo(opt);
    ASSERT_EQ(r.violations.size(), 1u);
    EXPECT_EQ(r.violations[0].check, "empirical_matches_analytic");
}
