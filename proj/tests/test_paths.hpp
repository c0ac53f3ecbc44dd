#pragma once

#include <string>

#ifndef TOKBENCH_DATA_DIR
#error "TOKBENCH_DATA_DIR must point at the repository data/ directory"
#endif

namespace test_paths {

inline std::string data(const std::string& name) { return std::string(TOKBENCH_DATA_DIR) + "/" + name; }

}  // namespace test_paths
