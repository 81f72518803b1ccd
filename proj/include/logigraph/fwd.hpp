// SPDX-License-Identifier: Apache-2.0
#ifndef LOGIGRAPH_FWD_HPP
#define LOGIGRAPH_FWD_HPP

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace logigraph {

static constexpr auto DYN = Eigen::Dynamic;

template <typename T>
using Mat = Eigen::Matrix<T, DYN, DYN, Eigen::RowMajor>;
template <typename T>
using RowVec = Eigen::Matrix<T, 1, DYN>;
template <typename T>
using Vec = Eigen::Matrix<T, DYN, 1>;
template <typename T>
using MatRef = Eigen::Ref<const Mat<T>>;

using Matrix = Mat<double>;
using IndexVec = std::vector<int>;

/// Error carrying a short machine-readable code next to the message.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

enum class Origin { Context, Candidate };

inline const char* to_string(Origin o) {
  return o == Origin::Context ? "context" : "candidate";
}

} // namespace logigraph

#endif // LOGIGRAPH_FWD_HPP
