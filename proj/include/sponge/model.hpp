#pragma once

#include <map>
#include <vector>

#include "sponge/ifs.hpp"
#include "sponge/orderings.hpp"

namespace sponge {

/// A validated IFS with its admissible orderings, SPPC report and projected
/// systems for every ordering. Immutable after construction.
class SpongeModel {
 public:
  explicit SpongeModel(SpongeIFS ifs, const SearchOptions& opt = {});

  const SpongeIFS& ifs() const { return ifs_; }
  int dim() const { return ifs_.dim(); }
  int size() const { return ifs_.size(); }
  const ValidationReport& validation() const { return validation_; }
  const AdmissibleOrderings& orderings() const { return orderings_; }
  const std::vector<Permutation>& admissible() const { return admissible_; }
  bool is_admissible(const Permutation& sigma) const;
  const SppcReport& sppc() const { return sppc_; }
  const OrderingSystem& system(const Permutation& sigma) const;
  const SearchOptions& search_options() const { return search_; }

 private:
  SpongeIFS ifs_;
  SearchOptions search_;
  ValidationReport validation_;
  AdmissibleOrderings orderings_;
  std::vector<Permutation> admissible_;
  SppcReport sppc_;
  std::map<Permutation, OrderingSystem> systems_;
};

}  // namespace sponge
