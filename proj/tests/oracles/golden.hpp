#pragma once

// Golden CLI cases: <name>.args holds one argument per line ("@/" expands to
// the golden directory); <name>.out holds "exit N", stdout, then stderr after
// a "--- stderr" line.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace oracle {

struct GoldenCase {
  std::string name;
  std::filesystem::path args;
  std::filesystem::path expected;
};

inline std::vector<GoldenCase> golden_cases(const std::filesystem::path& dir) {
  std::vector<GoldenCase> out;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".args") {
      auto exp = e.path();
      exp.replace_extension(".out");
      out.push_back({e.path().stem().string(), e.path(), exp});
    }
  std::sort(out.begin(), out.end(), [](const GoldenCase& a, const GoldenCase& b) { return a.name < b.name; });
  return out;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string run_golden(const GoldenCase& c, const std::filesystem::path& dir) {
  std::vector<std::string> args{"htlab"};
  std::istringstream lines(slurp(c.args));
  for (std::string line; std::getline(lines, line);) {
    if (line.empty())
      continue;
    if (line.rfind("@/", 0) == 0)
      line = (dir / line.substr(2)).string();
    args.push_back(line);
  }
  std::vector<const char*> argv;
  for (const auto& a : args)
    argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = htlab::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  std::string err_text = err.str();
  // Paths in messages depend on the checkout location.
  for (std::size_t pos; (pos = err_text.find(dir.string())) != std::string::npos;)
    err_text.replace(pos, dir.string().size(), "@");
  return "exit " + std::to_string(code) + "\n" + out.str() + "--- stderr\n" + err_text;
}

}  // namespace oracle
