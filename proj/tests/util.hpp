#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>

namespace testutil {

// Writes `content` under a per-process scratch directory and returns the path.
inline std::string write_temp_file(const std::string& name, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path dir =
        fs::temp_directory_path() / ("causalfi-tests-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const fs::path path = dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    return path.string();
}

inline std::string fixture_path(const std::string& name) {
    return std::string(CAUSALFI_FIXTURE_DIR) + "/" + name;
}

}  // namespace testutil
