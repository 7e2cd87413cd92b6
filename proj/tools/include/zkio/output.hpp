#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

namespace zkio {

class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Creates the directory if needed and checks that files can be created in it.
void prepare_output_dir(const std::filesystem::path& dir);

// Writes to a temporary sibling and renames it over the target.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace zkio
