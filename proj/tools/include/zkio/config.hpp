#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "zk/experiments.hpp"

namespace zkio {

enum class Kind { decay, epsilon_convergence, perturbation, lemmas, single_run };
std::string to_string(Kind k);

struct RunConfig {
    Kind kind = Kind::decay;
    zk::Scenario scenario;
    zk::DecayOptions decay;
    std::vector<double> epsilons{4e-3, 2e-3, 1e-3};
    double reference_epsilon = 0.0;
    zk::PerturbationOptions perturbation;
    zk::LemmaOptions lemmas;
    std::string output_directory = "out";
    bool write_csv = true;
    bool write_json = true;
    std::string source_text;  // the file as read, echoed into outputs
};

// Every problem found in a config file, not only the first.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::string& path);

// Levenshtein distance, used to suggest the nearest valid key.
std::size_t edit_distance(const std::string& a, const std::string& b);

}  // namespace zkio
