#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hretan/classifier.hpp"
#include "hretan/structure.hpp"
#include "hretan/synthgen.hpp"

namespace hretan::cli {

enum class Command { Validate, Eval, Correlate, Synth };

struct RunConfig {
    Command command = Command::Validate;
    std::string hierarchy_path;
    std::string data_path;
    std::string out_path;
    AlgorithmKind algorithm = AlgorithmKind::HreTanMix;
    std::size_t folds = 10;
    std::uint64_t seed = 1;
    std::optional<std::string> positive_class;
    MiMode mi_mode = MiMode::Conditional;
    bool strict = false;

    // eval
    std::string dump_structure_dir;
    std::string folds_out_path;
    std::string dataset_name;
    int threads = 0;

    // correlate
    std::string reports_dir;
    std::string imbalance_csv;
    std::string scatter_path;
    std::optional<AlgorithmKind> algorithm_filter;

    // synth
    SynthConfig synth;
};

/// 0 success, 1 input/validation failure, 2 configuration error, 3 internal
/// contract violation. Errors are reported as one JSON object on `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv and runs. Flag errors exit with 2.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace hretan::cli
