// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/featurize/pdb.hpp"

#include <fmt/format.h>

#include <set>

#include "scope/util/error.hpp"
#include "scope/util/text.hpp"

namespace scope::featurize {
namespace {

const std::set<std::string, std::less<>> kModifiedResidues = {"MSE", "SEC", "PYL", "HYP", "SEP", "TPO", "PTR"};

std::string_view field(std::string_view line, std::size_t begin, std::size_t end) {
  if (begin >= line.size()) return {};
  return line.substr(begin, std::min(end, line.size()) - begin);
}

double coord(std::string_view line, std::size_t begin, int line_no) {
  auto v = parse_double(trim(field(line, begin, begin + 8)));
  if (!v) throw ParseError(fmt::format("PDB line {}: bad coordinate", line_no));
  return *v;
}

}  // namespace

std::vector<PdbResidue> parse_pdb(std::string_view text) {
  std::vector<PdbResidue> residues;
  int line_no = 0;
  bool saw_atom = false;
  const auto lines = split(text, '\n');
  for (std::string_view line : lines) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto record = field(line, 0, 6);
    if (record.starts_with("ENDMDL")) {
      if (saw_atom) break;
      continue;
    }
    const bool is_atom = record == "ATOM  " || record.starts_with("ATOM");
    const bool is_het = record.starts_with("HETATM");
    if (!is_atom && !is_het) continue;
    if (line.size() < 54) throw ParseError(fmt::format("PDB line {}: truncated atom record", line_no));
    const std::string name{trim(field(line, 17, 20))};
    if (is_het && !kModifiedResidues.contains(name)) continue;
    const char altloc = line[16];
    if (altloc != ' ' && altloc != 'A') continue;
    const char chain = line[21];
    auto seq = parse_int(trim(field(line, 22, 26)));
    if (!seq) throw ParseError(fmt::format("PDB line {}: bad residue number", line_no));
    const char icode = line.size() > 26 ? line[26] : ' ';
    std::array<double, 3> xyz{coord(line, 30, line_no), coord(line, 38, line_no), coord(line, 46, line_no)};
    saw_atom = true;
    if (residues.empty() || residues.back().chain != chain || residues.back().seq_number != *seq ||
        residues.back().insertion_code != icode) {
      residues.push_back({name, chain, static_cast<int>(*seq), icode, {}});
    }
    residues.back().atoms.push_back(xyz);
  }
  if (!saw_atom) throw ParseError("PDB: no atom records");
  return residues;
}

Matrix residue_centroids(const std::vector<PdbResidue>& residues, std::size_t sequence_length) {
  if (residues.size() < sequence_length) {
    throw ParseError(fmt::format("structure has {} residues but sequence needs {}", residues.size(),
                                 sequence_length));
  }
  Matrix c(static_cast<Eigen::Index>(sequence_length), 3);
  for (std::size_t r = 0; r < sequence_length; ++r) {
    const auto& atoms = residues[r].atoms;
    for (int d = 0; d < 3; ++d) {
      double s = 0.0;
      for (const auto& a : atoms) s += a[static_cast<std::size_t>(d)];
      c(static_cast<Eigen::Index>(r), d) = s / static_cast<double>(atoms.size());
    }
  }
  return c;
}

Matrix parse_protein_structure(const std::filesystem::path& path, std::string_view sequence) {
  return residue_centroids(parse_pdb(read_file(path)), sequence.size());
}

}  // namespace scope::featurize
