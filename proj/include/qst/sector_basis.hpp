// Copyright 2026 The qst Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QST_SECTOR_BASIS_HPP_
#define QST_SECTOR_BASIS_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "qst/errors.hpp"

namespace qst {

/// Sorted 1-based positions of the flipped spins.
using Configuration = std::vector<int>;

/// Dense indexing of the fixed-magnetization sector with 0, 1 or 2
/// excitations on `n_sites` spins. Configurations are ordered
/// lexicographically: (1,2), (1,3), ..., (1,N), (2,3), ...
class SectorBasis {
 public:
  SectorBasis(int n_sites, int n_excitations)
      : n_sites_(n_sites), n_excitations_(n_excitations) {
    if (n_sites < 2) {
      throw ParameterError("n_sites", "must be at least 2, got " + std::to_string(n_sites));
    }
    if (n_excitations < 0 || n_excitations > 2) {
      throw ParameterError("n_excitations",
                           "must be 0, 1 or 2, got " + std::to_string(n_excitations));
    }
    if (n_excitations > n_sites) {
      throw ParameterError("n_excitations", "exceeds n_sites");
    }
    switch (n_excitations) {
      case 0:
        configs_.emplace_back();
        break;
      case 1:
        for (int i = 1; i <= n_sites; ++i) configs_.push_back({i});
        break;
      default:
        for (int i = 1; i <= n_sites; ++i)
          for (int j = i + 1; j <= n_sites; ++j) configs_.push_back({i, j});
    }
  }

  int n_sites() const noexcept { return n_sites_; }
  int n_excitations() const noexcept { return n_excitations_; }
  std::size_t dimension() const noexcept { return configs_.size(); }
  const std::vector<Configuration> &ordering() const noexcept { return configs_; }

  const Configuration &config_of(std::size_t index) const {
    if (index >= configs_.size()) {
      throw ParameterError("index", "out of range for sector of dimension " +
                                        std::to_string(configs_.size()));
    }
    return configs_[index];
  }

  std::size_t index_of(const Configuration &config) const {
    if (static_cast<int>(config.size()) != n_excitations_) {
      throw ParameterError("config", "expected " + std::to_string(n_excitations_) +
                                         " sites, got " + std::to_string(config.size()));
    }
    for (std::size_t k = 0; k < config.size(); ++k) {
      if (config[k] < 1 || config[k] > n_sites_) {
        throw ParameterError("config", "site " + std::to_string(config[k]) + " out of range");
      }
      if (k > 0 && config[k] <= config[k - 1]) {
        throw ParameterError("config", "sites must be strictly increasing");
      }
    }
    switch (n_excitations_) {
      case 0:
        return 0;
      case 1:
        return static_cast<std::size_t>(config[0] - 1);
      default: {
        const std::size_t i = static_cast<std::size_t>(config[0]);
        const std::size_t j = static_cast<std::size_t>(config[1]);
        const std::size_t n = static_cast<std::size_t>(n_sites_);
        // pairs (i', *) with i' < i occupy sum_{k<i} (n-k) slots
        return (i - 1) * n - (i - 1) * i / 2 + (j - i - 1);
      }
    }
  }

 private:
  int n_sites_;
  int n_excitations_;
  std::vector<Configuration> configs_;
};

}  // namespace qst

#endif  // QST_SECTOR_BASIS_HPP_
