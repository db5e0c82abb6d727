#include "sponge/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "sponge/error.hpp"

namespace sponge {

Permutation identity_permutation(int d) {
  Permutation p(d);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

std::vector<Permutation> all_permutations(int d) {
  std::vector<Permutation> out;
  Permutation p = identity_permutation(d);
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::string format_ordering(const Permutation& sigma) {
  std::string s = "(";
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(sigma[k] + 1);
  }
  return s + ")";
}

Permutation parse_ordering(const std::string& text) {
  Permutation p;
  std::string cur;
  for (char c : text) {
    if (c >= '0' && c <= '9') {
      cur += c;
    } else if (!cur.empty()) {
      p.push_back(std::stoi(cur) - 1);
      cur.clear();
    }
  }
  if (!cur.empty()) p.push_back(std::stoi(cur) - 1);
  if (!is_permutation_of(p, static_cast<int>(p.size())))
    throw ParseError("not a permutation: '" + text + "'");
  return p;
}

bool is_permutation_of(const Permutation& sigma, int d) {
  if (static_cast<int>(sigma.size()) != d) return false;
  std::vector<bool> seen(d, false);
  for (int c : sigma) {
    if (c < 0 || c >= d || seen[c]) return false;
    seen[c] = true;
  }
  return true;
}

SpongeIFS::SpongeIFS(int dim, std::vector<DiagonalMap> maps) : dim_(dim), maps_(std::move(maps)) {
  if (dim_ < 1) throw DomainError("dimension must be positive");
  if (maps_.empty()) throw DomainError("IFS needs at least one map");
  const int n = size();
  ratio_.resize(n * dim_);
  lambda_.resize(n * dim_);
  log_lambda_.resize(n * dim_);
  lambda_min_ = 1.0;
  lambda_max_ = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto& m = maps_[i];
    if (static_cast<int>(m.diag.size()) != dim_ || static_cast<int>(m.trans.size()) != dim_)
      throw DomainError("map " + std::to_string(i + 1) + " does not have " + std::to_string(dim_) +
                        " coordinates");
    for (int c = 0; c < dim_; ++c) {
      Rational r = abs(m.diag[c]);
      ratio_[i * dim_ + c] = r;
      double l = to_double(r);
      lambda_[i * dim_ + c] = l;
      log_lambda_[i * dim_ + c] = l > 0.0 ? std::log(l) : -INFINITY;
      lambda_min_ = std::min(lambda_min_, l);
      lambda_max_ = std::max(lambda_max_, l);
    }
  }
  coord_id_.resize(n * dim_);
  for (int c = 0; c < dim_; ++c) {
    std::map<std::pair<Rational, Rational>, int> ids;
    for (int i = 0; i < n; ++i)
      coord_id_[i * dim_ + c] =
          ids.emplace(std::make_pair(maps_[i].diag[c], maps_[i].trans[c]), static_cast<int>(ids.size())).first->second;
  }
}

std::pair<Rational, Rational> SpongeIFS::interval(int i, int c) const {
  const Rational& t = maps_.at(i).trans.at(c);
  Rational e = t + maps_[i].diag[c];
  return t <= e ? std::make_pair(t, e) : std::make_pair(e, t);
}

ValidationReport validate(const SpongeIFS& ifs) {
  ValidationReport rep;
  const int N = ifs.size(), d = ifs.dim();
  auto add = [&](std::string kind, std::string msg, int i = -1, int c = -1) {
    rep.violations.push_back({std::move(kind), std::move(msg), i, c});
  };
  if (N < 2) add("too few maps", "an IFS needs at least two maps");

  for (int i = 0; i < N; ++i) {
    for (int c = 0; c < d; ++c) {
      const Rational& r = ifs.ratio(i, c);
      std::string where = "map " + std::to_string(i + 1) + ", coordinate " + std::to_string(c + 1);
      if (r == 0 || r >= 1) add("not a strict contraction", where + ": |a| must lie in (0,1)", i, c);
      auto [lo, hi] = ifs.interval(i, c);
      if (lo < 0 || hi > 1)
        add("image exits unit cube", where + ": image [" + to_string(lo) + ", " + to_string(hi) +
                                         "] is not inside [0,1]", i, c);
    }
  }

  std::map<std::vector<Rational>, int> seen;
  for (int i = 0; i < N; ++i) {
    std::vector<Rational> key;
    for (int c = 0; c < d; ++c) {
      key.push_back(ifs.map(i).diag[c]);
      key.push_back(ifs.map(i).trans[c]);
    }
    auto [it, fresh] = seen.emplace(std::move(key), i);
    if (!fresh)
      add("duplicate maps", "maps " + std::to_string(it->second + 1) + " and " + std::to_string(i + 1) +
                                " are identical", i);
  }

  // face condition: every face avoided by some image at positive distance
  double r0 = INFINITY;
  for (int c = 0; c < d; ++c) {
    for (int u = 0; u < 2; ++u) {
      Rational best = 0;
      for (int i = 0; i < N; ++i) {
        auto [lo, hi] = ifs.interval(i, c);
        Rational dist = u == 0 ? lo : Rational(1 - hi);
        best = std::max(best, dist);
      }
      if (best <= 0)
        add("face condition", "every image touches the face x_" + std::to_string(c + 1) + " = " +
                                  std::to_string(u), -1, c);
      r0 = std::min(r0, to_double(best));
    }
  }
  rep.r0 = std::max(0.0, r0);
  rep.lambda_min = ifs.lambda_min();
  return rep;
}

void require_valid(const SpongeIFS& ifs) {
  auto rep = validate(ifs);
  if (rep.ok()) return;
  std::string msg = "invalid IFS:";
  for (const auto& v : rep.violations) msg += "\n  " + v.kind + ": " + v.message;
  throw ValidationError(msg);
}

namespace {

void check_args(const SpongeIFS& ifs, const Permutation& sigma, int n) {
  if (!is_permutation_of(sigma, ifs.dim())) throw DomainError("ordering is not a permutation of the coordinates");
  if (n < 1 || n > ifs.dim()) throw DomainError("level out of range");
}

}  // namespace

bool exact_overlap(const SpongeIFS& ifs, int i, int j, const Permutation& sigma, int n) {
  check_args(ifs, sigma, n);
  if (i < 0 || j < 0 || i >= ifs.size() || j >= ifs.size()) throw DomainError("map index out of range");
  for (int k = 0; k < n; ++k) {
    int c = sigma[k];
    if (ifs.map(i).diag[c] != ifs.map(j).diag[c] || ifs.map(i).trans[c] != ifs.map(j).trans[c])
      return false;
  }
  return true;
}

namespace {

ProjectedSystem finish(const Permutation& sigma, int n, std::vector<int> proj) {
  ProjectedSystem ps;
  ps.ordering = sigma;
  ps.level = n;
  ps.position.assign(proj.size(), -1);
  for (int j = 0; j < static_cast<int>(proj.size()); ++j)
    if (proj[j] == j) {
      ps.position[j] = static_cast<int>(ps.indices.size());
      ps.indices.push_back(j);
    }
  ps.proj = std::move(proj);
  return ps;
}

}  // namespace

ProjectedSystem project_index_set(const SpongeIFS& ifs, const Permutation& sigma, int n) {
  check_args(ifs, sigma, n);
  std::map<std::vector<int>, int> first;
  std::vector<int> proj(ifs.size());
  for (int j = 0; j < ifs.size(); ++j) {
    std::vector<int> key(n);
    for (int k = 0; k < n; ++k) key[k] = ifs.coord_class(j, sigma[k]);
    proj[j] = first.emplace(std::move(key), j).first->second;
  }
  return finish(sigma, n, std::move(proj));
}

ProjectedSystem project_index_set_pairwise(const SpongeIFS& ifs, const Permutation& sigma, int n) {
  check_args(ifs, sigma, n);
  const int N = ifs.size(), d = ifs.dim();
  // alive[m][j]: j still in I_m (m = 1..d)
  std::vector<std::vector<bool>> alive(d + 1, std::vector<bool>(N, true));
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) {
      int top = 0;
      for (int m = d - 1; m >= 1; --m)
        if (exact_overlap(ifs, i, j, sigma, m)) {
          top = m;
          break;
        }
      for (int m = top; m >= 1; --m) alive[m][j] = false;
    }
  std::vector<int> proj(N, -1);
  for (int j = 0; j < N; ++j) {
    if (n == d || alive[n][j]) {
      proj[j] = j;
      continue;
    }
    for (int i = 0; i < N; ++i)
      if (alive[n][i] && exact_overlap(ifs, i, j, sigma, n)) {
        proj[j] = i;
        break;
      }
  }
  return finish(sigma, n, std::move(proj));
}

OrderingSystem build_ordering_system(const SpongeIFS& ifs, const Permutation& sigma) {
  OrderingSystem os;
  os.ordering = sigma;
  const int d = ifs.dim();
  for (int n = 1; n <= d; ++n) os.levels.push_back(project_index_set(ifs, sigma, n));
  os.loglam.resize(d);
  for (int m = 1; m <= d; ++m) {
    const auto& lv = os.levels[m - 1];
    os.loglam[m - 1].resize(m);
    for (int l = 1; l <= m; ++l) {
      auto& row = os.loglam[m - 1][l - 1];
      row.resize(lv.count());
      for (int k = 0; k < lv.count(); ++k) row[k] = ifs.log_lambda(lv.indices[k], sigma[l - 1]);
    }
  }
  return os;
}

SppcReport check_sppc(const SpongeIFS& ifs, const std::vector<Permutation>& admissible) {
  SppcReport rep;
  const int N = ifs.size(), d = ifs.dim();
  constexpr std::size_t kMaxWitnesses = 32;
  // precompute intervals
  std::vector<std::pair<Rational, Rational>> iv(N * d);
  for (int i = 0; i < N; ++i)
    for (int c = 0; c < d; ++c) iv[i * d + c] = ifs.interval(i, c);

  for (const auto& sigma : admissible) {
    for (int n = 1; n <= d; ++n) {
      for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) {
          if (exact_overlap(ifs, i, j, sigma, n)) continue;
          bool open_disjoint = false, closed_disjoint = false;
          for (int k = 0; k < n; ++k) {
            int c = sigma[k];
            const auto& a = iv[i * d + c];
            const auto& b = iv[j * d + c];
            if (a.second <= b.first || b.second <= a.first) open_disjoint = true;
            if (a.second < b.first || b.second < a.first) closed_disjoint = true;
          }
          if (!open_disjoint) {
            rep.satisfied = false;
            if (rep.failures.size() < kMaxWitnesses) rep.failures.push_back({sigma, n, i, j});
          }
          if (!closed_disjoint) {
            rep.very_strong = false;
            if (rep.very_strong_failures.size() < kMaxWitnesses)
              rep.very_strong_failures.push_back({sigma, n, i, j});
          }
        }
    }
  }
  return rep;
}

}  // namespace sponge
