#include "sponge/model.hpp"

#include <algorithm>

#include "sponge/error.hpp"

namespace sponge {

SpongeModel::SpongeModel(SpongeIFS ifs, const SearchOptions& opt) : ifs_(std::move(ifs)), search_(opt) {
  validation_ = validate(ifs_);
  require_valid(ifs_);
  for (const auto& sigma : all_permutations(ifs_.dim()))
    systems_.emplace(sigma, build_ordering_system(ifs_, sigma));
  orderings_ = admissible_orderings(ifs_, search_);
  admissible_ = orderings_.admissible();
  sppc_ = check_sppc(ifs_, admissible_);
}

bool SpongeModel::is_admissible(const Permutation& sigma) const {
  return std::find(admissible_.begin(), admissible_.end(), sigma) != admissible_.end();
}

const OrderingSystem& SpongeModel::system(const Permutation& sigma) const {
  auto it = systems_.find(sigma);
  if (it == systems_.end()) throw DomainError("unknown ordering " + format_ordering(sigma));
  return it->second;
}

}  // namespace sponge
