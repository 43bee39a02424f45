#include "fillin/scenarios.hpp"
#include "fillin/sphere_grid.hpp"

#include <cstdio>
#include <map>
#include <string>
#include <vector>

using namespace fillin;

int main() {
  const std::map<int, std::string> titles{
      {1, "Schwarzschild Brown-York large-sphere limit"},
      {2, "AH mass monotonicity, derivative identity and limit"},
      {3, "quasi-spherical prescription: convergence order and ODE reduction"},
      {4, "comparison bounds and boundary blow-up law"},
      {5, "convex surfaces: Lambda_+, Steiner, Gauss-Bonnet, diameter ordering, enclosure"},
      {6, "continuity of Lambda_+ under dilation"},
      {7, "Ricci flow paths: round flow, lower bound, equality, connecting and monotone paths, sandwich"},
      {8, "spin bound on flat balls and Schwarzschild spheres"},
  };
  // criteria each scenario feeds, used when a scenario aborts
  const std::map<std::string, std::vector<int>> feeds{
      {"qs-collar", {3, 4}},  {"ah-mass", {2}},         {"schwarzschild-by", {1}}, {"cobordism", {3, 4}},
      {"spin-bound", {8}},    {"embed-steiner", {5, 6}}, {"prop51-corpus", {5}},    {"stability-2d", {7}},
      {"ricci-path", {7}},    {"monotone-path-sandwich", {7}}};
  std::map<int, std::vector<std::string>> failures;
  std::map<int, int> counts;
  int supporting_failures = 0;
  double convex_runtime = 0;

  for (const auto& name : list_scenarios()) {
    try {
      const Report r = run_scenario(name);
      for (const auto& c : r.checks) {
        if (c.criterion == 0) {
          if (!c.pass) {
            ++supporting_failures;
            std::printf("  supporting check failed: %s / %s = %s\n", name.c_str(), c.name.c_str(), format_number(c.value).c_str());
          }
          continue;
        }
        ++counts[c.criterion];
        if (!c.pass) failures[c.criterion].push_back(name + " / " + c.name + " = " + format_number(c.value));
      }
      if (name == "embed-steiner" || name == "prop51-corpus") convex_runtime += r.runtime_seconds;
      std::printf("  ran %s in %.1f s\n", name.c_str(), r.runtime_seconds);
    } catch (const std::exception& e) {
      std::printf("  %s aborted: %s\n", name.c_str(), e.what());
      const auto it = feeds.find(name);
      if (it == feeds.end()) {
        ++supporting_failures;
      } else {
        for (int k : it->second) failures[k].push_back(name + " aborted");
      }
    }
  }
  ++counts[5];
  if (!(convex_runtime < 120)) failures[5].push_back("convex suite runtime " + format_number(convex_runtime) + " s");

  bool all = true;
  for (const auto& [k, title] : titles) {
    const bool pass = failures[k].empty() && counts[k] > 0;
    all = all && pass;
    std::printf("criterion %d: %s  %s (%d checks)\n", k, pass ? "PASS" : "FAIL", title.c_str(), counts[k]);
    for (const auto& f : failures[k]) std::printf("    failed: %s\n", f.c_str());
  }
  std::printf("supporting checks: %s\n", supporting_failures == 0 ? "PASS" : "FAIL");
  return all ? 0 : 1;
}
