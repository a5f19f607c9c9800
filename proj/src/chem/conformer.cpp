// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/chem/conformer.hpp"

#include <cmath>
#include <cstdlib>
#include <deque>

#include <fmt/format.h>

#include "scope/util/rng.hpp"
#include "scope/util/text.hpp"

namespace scope::chem {

ExternalConformerAdapter::ExternalConformerAdapter(std::string command_template,
                                                   std::filesystem::path work_dir)
    : command_template_(std::move(command_template)), work_dir_(std::move(work_dir)) {}

std::vector<Vec3> ExternalConformerAdapter::generate(const Molecule& mol,
                                                     const std::string& smiles) const {
  if (smiles.find('\'') != std::string::npos) {
    throw ConformerError("conformer adapter: SMILES contains a quote character");
  }
  auto out = work_dir_ / fmt::format("scope_conf_{:016x}.sdf", fnv1a64(smiles));
  std::string cmd = command_template_;
  auto replace_all = [&](const std::string& key, const std::string& value) {
    for (std::size_t pos = cmd.find(key); pos != std::string::npos; pos = cmd.find(key, pos + value.size())) {
      cmd.replace(pos, key.size(), value);
    }
  };
  replace_all("{smiles}", smiles);
  replace_all("{out}", out.string());
  std::filesystem::remove(out);
  const int status = std::system(cmd.c_str());
  if (status != 0 || !std::filesystem::exists(out)) {
    throw ConformerError(fmt::format("conformer adapter: command failed (status {}): {}", status, cmd));
  }
  try {
    auto coords = heavy_atom_coords(read_molblock(out), mol);
    std::filesystem::remove(out);
    return coords;
  } catch (const ParseError& e) {
    throw ConformerError(fmt::format("conformer adapter: {}", e.what()));
  }
}

std::vector<Vec3> CoarseEmbedder::generate(const Molecule& mol, const std::string& smiles) const {
  const std::size_t n = mol.num_atoms();
  if (n == 0) throw ConformerError("conformer: empty molecule");
  // Topological distances.
  constexpr int kUnreachable = -1;
  std::vector<std::vector<int>> topo(n, std::vector<int>(n, kUnreachable));
  for (std::size_t s = 0; s < n; ++s) {
    std::deque<int> queue{static_cast<int>(s)};
    topo[s][s] = 0;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int bi : mol.incident(u)) {
        int v = mol.bonds()[static_cast<std::size_t>(bi)].other(u);
        if (topo[s][static_cast<std::size_t>(v)] != kUnreachable) continue;
        topo[s][static_cast<std::size_t>(v)] = topo[s][static_cast<std::size_t>(u)] + 1;
        queue.push_back(v);
      }
    }
  }
  auto target = [&](std::size_t i, std::size_t j) {
    int d = topo[i][j];
    if (d == kUnreachable) return 6.0;
    if (d == 1) return 1.5;
    if (d == 2) return 2.5;
    return 1.25 * d;
  };

  Rng rng = Rng::derive(seed_, smiles);
  const double box = 1.5 * std::cbrt(static_cast<double>(n)) + 1.0;
  std::vector<Vec3> x(n);
  for (auto& p : x) p = {rng.uniform(-box, box), rng.uniform(-box, box), rng.uniform(-box, box)};

  // Stress majorisation (SMACOF) with weights 1/d^2.
  for (int it = 0; it < iterations_; ++it) {
    std::vector<Vec3> next(n, Vec3{0, 0, 0});
    for (std::size_t i = 0; i < n; ++i) {
      double wsum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const double d = target(i, j);
        const double w = (topo[i][j] == kUnreachable ? 0.05 : 1.0) / (d * d);
        double dx = x[i][0] - x[j][0];
        double dy = x[i][1] - x[j][1];
        double dz = x[i][2] - x[j][2];
        double cur = std::sqrt(dx * dx + dy * dy + dz * dz);
        double scale = cur > 1e-9 ? d / cur : 0.0;
        next[i][0] += w * (x[j][0] + scale * dx);
        next[i][1] += w * (x[j][1] + scale * dy);
        next[i][2] += w * (x[j][2] + scale * dz);
        wsum += w;
      }
      if (wsum > 0) {
        for (auto& c : next[i]) c /= wsum;
      } else {
        next[i] = x[i];
      }
    }
    x = std::move(next);
  }
  return x;
}

std::unique_ptr<ConformerAdapter> make_conformer_adapter(const std::string& spec) {
  if (spec.empty() || spec == "coarse") return std::make_unique<CoarseEmbedder>();
  if (spec.starts_with("external:")) {
    return std::make_unique<ExternalConformerAdapter>(spec.substr(9));
  }
  throw InvalidArgument(fmt::format("unknown conformer adapter '{}'", spec));
}

}  // namespace scope::chem
