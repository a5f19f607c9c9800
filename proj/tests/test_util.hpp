// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <fmt/format.h>

#include <filesystem>
#include <string>

#include "scope/core/types.hpp"
#include "scope/util/matrix.hpp"
#include "scope/util/rng.hpp"
#include "scope/util/text.hpp"

namespace scope::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "scope") {
    Rng rng(fnv1a64(tag) ^ static_cast<std::uint64_t>(reinterpret_cast<std::uintptr_t>(this)));
    path_ = std::filesystem::temp_directory_path() / fmt::format("{}-{:016x}", tag, rng.next());
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline core::InteractionRecord interaction(const std::string& p, const std::string& c, int label,
                                           const std::string& source = "src") {
  core::InteractionRecord r;
  r.protein_id = p;
  r.compound_id = c;
  r.label = static_cast<std::uint8_t>(label);
  r.source = source;
  return r;
}

inline void add_protein(core::Corpus& corpus, const std::string& id, const std::string& seq = "ACDEFGHIK",
                        core::ProteinFamily family = core::ProteinFamily::kOther) {
  corpus.proteins[id] = {id, seq, family, ""};
}

inline void add_compound(core::Corpus& corpus, const std::string& id, const std::string& smiles = "CCO") {
  corpus.compounds[id] = {id, smiles, std::nullopt};
}

// Minimal PDB text: one CA atom per residue at the given coordinates.
inline std::string ca_trace_pdb(const std::string& sequence, const Matrix& coords) {
  static const char* kThree[] = {"ALA", "CYS", "ASP", "GLU", "PHE", "GLY", "HIS", "ILE", "LYS", "LEU",
                                 "MET", "ASN", "PRO", "GLN", "ARG", "SER", "THR", "VAL", "TRP", "TYR"};
  std::string out;
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    auto tok = core::residue_token(sequence[i]).value_or(0);
    const char* name = tok < 20 ? kThree[tok] : "UNK";
    out += fmt::format("ATOM  {:>5d}  CA  {:>3s} A{:>4d}    {:>8.3f}{:>8.3f}{:>8.3f}  1.00  0.00           C\n",
                       i + 1, name, i + 1, coords(static_cast<Eigen::Index>(i), 0),
                       coords(static_cast<Eigen::Index>(i), 1), coords(static_cast<Eigen::Index>(i), 2));
  }
  out += "END\n";
  return out;
}

}  // namespace scope::testing
