// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/chem/sdf.hpp"

#include <fmt/format.h>

#include "scope/util/error.hpp"
#include "scope/util/text.hpp"

namespace scope::chem {
namespace {

std::string field(std::string_view line, std::size_t start, std::size_t width) {
  if (start >= line.size()) return {};
  return std::string(trim(line.substr(start, width)));
}

int to_int(const std::string& s, const char* what, std::size_t line_no) {
  if (s.empty()) return 0;
  auto v = parse_int(s);
  if (!v) throw ParseError(fmt::format("molfile line {}: bad {} '{}'", line_no, what, s));
  return static_cast<int>(*v);
}

double to_double(const std::string& s, std::size_t line_no) {
  auto v = parse_double(s);
  if (!v) throw ParseError(fmt::format("molfile line {}: bad coordinate '{}'", line_no, s));
  return *v;
}

}  // namespace

MolBlock parse_molblock(std::string_view text) {
  std::vector<std::string> lines;
  for (auto& line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  if (lines.size() < 4) throw ParseError("molfile: truncated header");
  MolBlock block;
  block.title = lines[0];
  const std::string& counts = lines[3];
  if (counts.find("V3000") != std::string::npos) throw ParseError("molfile: V3000 is not supported");
  const int n_atoms = to_int(field(counts, 0, 3), "atom count", 4);
  const int n_bonds = to_int(field(counts, 3, 3), "bond count", 4);
  if (lines.size() < static_cast<std::size_t>(4 + n_atoms + n_bonds)) {
    throw ParseError("molfile: fewer lines than the counts line declares");
  }
  static constexpr int kChargeCode[] = {0, 3, 2, 1, 0, -1, -2, -3};
  for (int i = 0; i < n_atoms; ++i) {
    const std::size_t ln = static_cast<std::size_t>(4 + i);
    const std::string& line = lines[ln];
    Vec3 c{to_double(field(line, 0, 10), ln + 1), to_double(field(line, 10, 10), ln + 1),
           to_double(field(line, 20, 10), ln + 1)};
    std::string symbol = field(line, 31, 3);
    auto z = atomic_number(symbol);
    if (!z) {
      if (symbol == "D" || symbol == "T") {
        z = 1;
      } else {
        throw ParseError(fmt::format("molfile line {}: unknown element '{}'", ln + 1, symbol));
      }
    }
    int code = to_int(field(line, 36, 3), "charge code", ln + 1);
    block.atomic_numbers.push_back(*z);
    block.coords.push_back(c);
    block.charges.push_back(code >= 0 && code <= 7 ? kChargeCode[code] : 0);
    block.radicals.push_back(code == 4 ? 1 : 0);
    block.isotopes.push_back(0);
  }
  for (int i = 0; i < n_bonds; ++i) {
    const std::size_t ln = static_cast<std::size_t>(4 + n_atoms + i);
    const std::string& line = lines[ln];
    int a = to_int(field(line, 0, 3), "bond atom", ln + 1) - 1;
    int b = to_int(field(line, 3, 3), "bond atom", ln + 1) - 1;
    int type = to_int(field(line, 6, 3), "bond type", ln + 1);
    if (a < 0 || b < 0 || a >= n_atoms || b >= n_atoms) {
      throw ParseError(fmt::format("molfile line {}: bond atom out of range", ln + 1));
    }
    if (type < 1 || type > 4) {
      throw ParseError(fmt::format("molfile line {}: unsupported bond type {}", ln + 1, type));
    }
    block.bonds.push_back({a, b, type});
  }
  bool charges_reset = false;
  for (std::size_t ln = static_cast<std::size_t>(4 + n_atoms + n_bonds); ln < lines.size(); ++ln) {
    const std::string& line = lines[ln];
    if (line.starts_with("M  END") || line.starts_with("$$$$")) break;
    const bool chg = line.starts_with("M  CHG");
    const bool rad = line.starts_with("M  RAD");
    const bool iso = line.starts_with("M  ISO");
    if (!chg && !rad && !iso) continue;
    if (chg && !charges_reset) {
      // Any CHG line supersedes atom-block charges.
      std::fill(block.charges.begin(), block.charges.end(), 0);
      charges_reset = true;
    }
    const int count = to_int(field(line, 6, 3), "property count", ln + 1);
    for (int k = 0; k < count; ++k) {
      int atom = to_int(field(line, 10 + 8 * static_cast<std::size_t>(k), 3), "atom", ln + 1) - 1;
      int value = to_int(field(line, 14 + 8 * static_cast<std::size_t>(k), 3), "value", ln + 1);
      if (atom < 0 || atom >= n_atoms) throw ParseError("molfile: property atom out of range");
      auto idx = static_cast<std::size_t>(atom);
      if (chg) block.charges[idx] = value;
      if (rad) block.radicals[idx] = value == 2 ? 1 : (value == 0 ? 0 : 2);
      if (iso) block.isotopes[idx] = value;
    }
  }
  return block;
}

MolBlock read_molblock(const std::filesystem::path& path) {
  try {
    return parse_molblock(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

ConformerMolecule molecule_from_molblock(const MolBlock& block) {
  const std::size_t n = block.atomic_numbers.size();
  std::vector<int> new_index(n, -1);
  ConformerMolecule out;
  auto is_h = [&](std::size_t i) { return block.atomic_numbers[i] == 1 && block.charges[i] == 0; };
  for (std::size_t i = 0; i < n; ++i) {
    if (is_h(i)) continue;
    Atom atom;
    atom.atomic_number = block.atomic_numbers[i];
    atom.formal_charge = block.charges[i];
    atom.isotope = block.isotopes[i];
    new_index[i] = out.molecule.add_atom(atom);
    out.coords.push_back(block.coords[i]);
  }
  if (out.molecule.num_atoms() == 0) throw ParseError("molfile: no heavy atoms");
  for (const auto& e : block.bonds) {
    const auto a = static_cast<std::size_t>(e.a);
    const auto b = static_cast<std::size_t>(e.b);
    if (is_h(a) || is_h(b)) {
      if (is_h(a) && is_h(b)) continue;
      out.molecule.atom(new_index[is_h(a) ? b : a]).explicit_h += 1;
      continue;
    }
    BondOrder order = e.type == 4 ? BondOrder::kAromatic : static_cast<BondOrder>(e.type);
    out.molecule.add_bond(new_index[a], new_index[b], order);
    if (order == BondOrder::kAromatic) {
      out.molecule.atom(new_index[a]).aromatic = true;
      out.molecule.atom(new_index[b]).aromatic = true;
    }
  }
  out.molecule.perceive();
  for (std::size_t i = 0; i < n; ++i) {
    if (new_index[i] >= 0 && block.radicals[i] > 0) {
      out.molecule.atom(new_index[i]).radical_electrons = block.radicals[i];
    }
  }
  return out;
}

std::vector<Vec3> heavy_atom_coords(const MolBlock& block, const Molecule& mol) {
  std::vector<Vec3> coords;
  std::size_t k = 0;
  for (std::size_t i = 0; i < block.atomic_numbers.size(); ++i) {
    if (block.atomic_numbers[i] == 1) continue;
    if (k >= mol.num_atoms()) {
      throw ParseError(fmt::format("conformer has more heavy atoms than the molecule ({})",
                                   mol.num_atoms()));
    }
    if (block.atomic_numbers[i] != mol.atom(static_cast<int>(k)).atomic_number) {
      throw ParseError(fmt::format("conformer atom {} is {} but molecule atom {} is {}", i + 1,
                                   element_symbol(block.atomic_numbers[i]), k,
                                   element_symbol(mol.atom(static_cast<int>(k)).atomic_number)));
    }
    coords.push_back(block.coords[i]);
    ++k;
  }
  if (k != mol.num_atoms()) {
    throw ParseError(fmt::format("conformer has {} heavy atoms, molecule has {}", k,
                                 mol.num_atoms()));
  }
  return coords;
}

std::string format_sdf(const Molecule& mol, const std::vector<Vec3>& coords,
                       std::string_view title) {
  if (coords.size() != mol.num_atoms()) throw InvalidArgument("format_sdf: coordinate count");
  std::string out = fmt::format("{}\n  scope-dti\n\n", title);
  out += fmt::format("{:>3}{:>3}  0  0  0  0  0  0  0  0999 V2000\n", mol.num_atoms(),
                     mol.num_bonds());
  for (std::size_t i = 0; i < mol.num_atoms(); ++i) {
    const auto& c = coords[i];
    out += fmt::format("{:>10.4f}{:>10.4f}{:>10.4f} {:<3} 0  0  0  0  0  0  0  0  0  0  0  0\n",
                       c[0], c[1], c[2], element_symbol(mol.atom(static_cast<int>(i)).atomic_number));
  }
  for (const auto& b : mol.bonds()) {
    out += fmt::format("{:>3}{:>3}{:>3}  0\n", b.begin + 1, b.end + 1, static_cast<int>(b.order));
  }
  std::vector<std::pair<int, int>> charged;
  for (std::size_t i = 0; i < mol.num_atoms(); ++i) {
    int q = mol.atom(static_cast<int>(i)).formal_charge;
    if (q != 0) charged.emplace_back(static_cast<int>(i) + 1, q);
  }
  for (std::size_t start = 0; start < charged.size(); start += 8) {
    std::size_t end = std::min(charged.size(), start + 8);
    out += fmt::format("M  CHG{:>3}", end - start);
    for (std::size_t k = start; k < end; ++k) out += fmt::format(" {:>3} {:>3}", charged[k].first, charged[k].second);
    out += "\n";
  }
  out += "M  END\n$$$$\n";
  return out;
}

}  // namespace scope::chem
