#include "doctest.h"

#include <set>

#include "loqs/experiments.hpp"

using namespace loqs;

TEST_CASE("registry: required ids present, unique, documented") {
    const auto& infos = list_experiments();
    std::set<std::string> ids;
    for (const auto& i : infos) {
        CHECK(ids.insert(i.id).second);        // unique
        CHECK(i.params.size() >= 1);           // at least one documented parameter
        CHECK_FALSE(i.summary.empty());
        for (const auto& p : i.params) CHECK_FALSE(p.doc.empty());
    }
    for (const char* want : {"hom", "chsh", "ghz-paradox", "leggett", "teleport", "swap",
                             "purify-lo", "grover-box", "repeater-sweep"})
        CHECK(ids.count(want) == 1);
}

TEST_CASE("chsh defaults report S = 2 sqrt 2 to twelve significant digits") {
    auto res = run_experiment("chsh", {}, 0);
    std::string s;
    for (auto& [k, v] : res.summary)
        if (k == "S") s = v;
    CHECK(s.substr(0, 12) == "2.8284271247");
}

TEST_CASE("leggett sweep flags the violation window") {
    auto res = run_experiment("leggett", {{"phi_start_deg", "1"}, {"phi_stop_deg", "45"}}, 0);
    // the violated flag follows quantum > bound on each grid row
    for (auto& row : res.series) {
        double q = std::stod(row[1]), b = std::stod(row[2]);
        CHECK(row[3] == ((q > b) ? "true" : "false"));
    }
}

TEST_CASE("unknown ids and invalid parameters are rejected before computation") {
    CHECK_THROWS_AS(run_experiment("no-such-thing", {}, 0), UnknownExperiment);
    CHECK_THROWS_AS(run_experiment("purify-lo", {{"fidelity", "0.4"}}, 0), InvalidParameter);
    CHECK_THROWS_AS(run_experiment("purify-lo", {{"fidelity", "abc"}}, 0), InvalidParameter);
    CHECK_THROWS_AS(run_experiment("hom", {{"bogus", "1"}}, 0), InvalidParameter);
    CHECK_THROWS_AS(run_experiment("teleport", {{"input", "nope"}}, 0), InvalidParameter);

    // invalid parameter messages name the field
    try {
        run_experiment("purify-lo", {{"fidelity", "0.4"}}, 0);
        FAIL("expected InvalidParameter");
    } catch (const InvalidParameter& e) {
        CHECK(std::string(e.what()).find("fidelity") != std::string::npos);
    }
}

TEST_CASE("infeasible repeater configurations raise the structured error") {
    CHECK_THROWS_AS(run_experiment("repeater-sweep",
                                   {{"segments", "16"}, {"F1", "0.56"}, {"runs", "10"}}, 0),
                    InfeasibleConfiguration);
}

TEST_CASE("documents are byte-identical for equal id, params and seed") {
    std::map<std::string, std::string> params{{"input", "random"}};
    auto a = run_experiment("teleport", params, 42);
    auto b = run_experiment("teleport", params, 42);
    CHECK(render_document("teleport", params, 42, a) == render_document("teleport", params, 42, b));

    auto c = run_experiment("teleport", params, 43);
    CHECK(render_document("teleport", params, 42, a) != render_document("teleport", params, 43, c));

    // sampled experiments reproduce exactly under the same seed
    std::map<std::string, std::string> cc{{"trials", "5000"}};
    auto d = run_experiment("epr-fringe", cc, 7);
    auto e = run_experiment("epr-fringe", cc, 7);
    CHECK(render_document("epr-fringe", cc, 7, d) == render_document("epr-fringe", cc, 7, e));
}

TEST_CASE("parameter files parse key = value lines with sections and comments") {
    auto m = parse_param_file("# comment\nалpha = 1\n[sub]\nkey = v # trailing\n\n");
    CHECK(m.size() == 2);
    CHECK(m.at("sub.key") == "v");

    CHECK_THROWS_AS(parse_param_file("not a kv line\n"), InvalidParameter);
}

TEST_CASE("every registered experiment runs at its defaults") {
    for (const auto& info : list_experiments()) {
        std::map<std::string, std::string> params;
        if (info.id == "repeater-sweep") params["runs"] = "20", params["segments"] = "2,4";
        auto res = run_experiment(info.id, params, 1);
        CHECK_FALSE(res.summary.empty());
    }
}
