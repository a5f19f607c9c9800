// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "scope/chem/molecule.hpp"
#include "scope/chem/sdf.hpp"
#include "scope/util/error.hpp"

namespace scope::chem {

class ConformerError : public Error {
 public:
  using Error::Error;
};

// Supplies 3D heavy-atom coordinates for a molecule parsed from SMILES. The
// k-th returned coordinate belongs to atom k.
class ConformerAdapter {
 public:
  virtual ~ConformerAdapter() = default;
  virtual std::vector<Vec3> generate(const Molecule& mol, const std::string& smiles) const = 0;
  virtual std::string name() const = 0;
};

// Runs an external program that writes an SDF. The command template may
// contain `{smiles}` and `{out}` placeholders, e.g.
// `python3 embed.py '{smiles}' {out}`. The SDF's heavy atoms must follow the
// SMILES atom order.
class ExternalConformerAdapter final : public ConformerAdapter {
 public:
  explicit ExternalConformerAdapter(std::string command_template,
                                    std::filesystem::path work_dir = std::filesystem::temp_directory_path());
  std::vector<Vec3> generate(const Molecule& mol, const std::string& smiles) const override;
  std::string name() const override { return "external"; }

 private:
  std::string command_template_;
  std::filesystem::path work_dir_;
};

// Deterministic coarse embedding: stress minimisation of topological
// target distances (1.5 A per bond, 2.5 A for 1-3 pairs) from a seeded start.
// Produces plausible bond lengths only; it is not a force-field geometry.
class CoarseEmbedder final : public ConformerAdapter {
 public:
  explicit CoarseEmbedder(std::uint64_t seed = 7, int iterations = 400)
      : seed_(seed), iterations_(iterations) {}
  std::vector<Vec3> generate(const Molecule& mol, const std::string& smiles) const override;
  std::string name() const override { return "coarse"; }

 private:
  std::uint64_t seed_;
  int iterations_;
};

// "coarse" or "external:<command template>".
std::unique_ptr<ConformerAdapter> make_conformer_adapter(const std::string& spec);

}  // namespace scope::chem
