// Temporary directory removed on scope exit.

#ifndef EMETREE_TESTS_SCRATCH_HPP
#define EMETREE_TESTS_SCRATCH_HPP

#include <filesystem>
#include <random>
#include <string>

namespace emetree::testing {

class Scratch {
public:
  Scratch() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("emetree-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~Scratch() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
  std::filesystem::path path_;
};

}  // namespace emetree::testing

#endif  // EMETREE_TESTS_SCRATCH_HPP
