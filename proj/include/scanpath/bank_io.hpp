#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>

#include "scanpath/angle_feature.hpp"

namespace scanpath {

// Flat text format, one check per line:
//
//   angle-set-bank v1
//   num_sets=<n>,set_size=<k>,seed=<s>,range_min=<r>
//   set_index,check_index,base,range
//   0,0,<base>,<range>
//   ...
//
// Reals are written in shortest round-trip form, so reading back reproduces
// the bank exactly.

void write_bank(std::ostream& out, const AngleSetBank& bank);
AngleSetBank read_bank(std::istream& in);

std::string bank_to_string(const AngleSetBank& bank);
AngleSetBank bank_from_string(const std::string& text);

void save_bank(const std::filesystem::path& path, const AngleSetBank& bank);
AngleSetBank load_bank(const std::filesystem::path& path);

}  // namespace scanpath
