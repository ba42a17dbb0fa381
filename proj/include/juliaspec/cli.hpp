#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace juliaspec {

struct RunConfig {
    std::string command;
    std::string kind = "family";
    int p = 3;
    int k = 2;
    int m = 0;                    // 0: family 7, mating 10
    double rtol = 1e-8;
    double residual_tol = 1e-8;
    double support_tol = 1e-6;
    std::string out = ".";
    std::vector<int> eigvec;
    bool weyl = false;
    double alpha = 0.0;           // 0: k/(k+1) for the family, 0.7 for the mating
    int count = 150;
    int j_max = 2;

    int level() const;
    double weyl_alpha() const;
    nlohmann::json to_json() const;
};

int cmd_graph(const RunConfig& cfg, std::ostream& out);
int cmd_spectrum(const RunConfig& cfg, std::ostream& out);
int cmd_conjectures(const RunConfig& cfg, std::ostream& out);

// Parses flags (and an optional --config file) and dispatches.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Replace every floating point value by its 15-significant-digit form.
void round_floats(nlohmann::json& j);

}  // namespace juliaspec
