#include "scanpath/bank_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "scanpath/error.hpp"
#include "scanpath/text.hpp"

namespace scanpath {

namespace {

constexpr const char* kMagic = "angle-set-bank v1";
constexpr const char* kColumns = "set_index,check_index,base,range";

std::string next_line(std::istream& in, std::size_t& line_no) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("bank file truncated after line " + std::to_string(line_no));
  }
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

void write_bank(std::ostream& out, const AngleSetBank& bank) {
  out << kMagic << '\n'
      << "num_sets=" << bank.num_sets() << ",set_size=" << bank.set_size()
      << ",seed=" << bank.seed() << ",range_min=" << text::format_double(bank.range_min())
      << '\n'
      << kColumns << '\n';
  for (const auto& set : bank.sets()) {
    for (std::size_t k = 0; k < set.checks.size(); ++k) {
      out << set.set_index << ',' << k << ',' << text::format_double(set.checks[k].base) << ','
          << text::format_double(set.checks[k].range) << '\n';
    }
  }
}

AngleSetBank read_bank(std::istream& in) {
  std::size_t line_no = 0;
  if (next_line(in, line_no) != kMagic) throw ParseError("not an angle-set-bank v1 file");

  std::map<std::string, std::string> header;
  const auto header_line = next_line(in, line_no);
  for (auto field : text::split_csv(header_line)) {
    const auto eq = field.find('=');
    if (eq == std::string_view::npos) throw ParseError("bad bank header field");
    header[std::string(field.substr(0, eq))] = std::string(field.substr(eq + 1));
  }
  auto int_field = [&](const char* key) {
    const auto it = header.find(key);
    const auto v = it == header.end() ? std::nullopt : text::parse_int(it->second);
    if (!v || *v < 0) throw ParseError(std::string("bank header lacks valid ") + key);
    return static_cast<std::uint64_t>(*v);
  };
  const auto num_sets = int_field("num_sets");
  const auto set_size = int_field("set_size");
  const auto seed_it = header.find("seed");
  if (seed_it == header.end()) throw ParseError("bank header lacks seed");
  std::uint64_t seed = 0;
  {
    std::istringstream ss(seed_it->second);
    if (!(ss >> seed)) throw ParseError("bank header has a bad seed");
  }
  double range_min = kDefaultRangeMin;
  if (const auto it = header.find("range_min"); it != header.end()) {
    const auto v = text::parse_double(it->second);
    if (!v) throw ParseError("bank header has a bad range_min");
    range_min = *v;
  }
  if (num_sets == 0 || set_size == 0 || set_size > kMaxSetSize) {
    throw ParseError("bank header has an invalid shape");
  }
  if (next_line(in, line_no) != kColumns) throw ParseError("bank column header missing");

  std::vector<AngleSet> sets(num_sets);
  for (std::size_t i = 0; i < num_sets; ++i) {
    sets[i].set_index = i;
    sets[i].checks.resize(set_size);
    for (std::size_t k = 0; k < set_size; ++k) {
      const auto line = next_line(in, line_no);
      const auto f = text::split_csv(line);
      const auto si = f.size() == 4 ? text::parse_int(f[0]) : std::nullopt;
      const auto ki = f.size() == 4 ? text::parse_int(f[1]) : std::nullopt;
      const auto base = f.size() == 4 ? text::parse_double(f[2]) : std::nullopt;
      const auto range = f.size() == 4 ? text::parse_double(f[3]) : std::nullopt;
      if (!si || !ki || !base || !range) {
        throw ParseError("bank line " + std::to_string(line_no) + " is malformed");
      }
      if (static_cast<std::size_t>(*si) != i || static_cast<std::size_t>(*ki) != k) {
        throw ParseError("bank line " + std::to_string(line_no) + " is out of order");
      }
      sets[i].checks[k].base = *base;
      sets[i].checks[k].range = *range;
    }
  }
  try {
    return AngleSetBank(std::move(sets), set_size, seed, range_min);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(std::string("invalid bank: ") + e.what());
  }
}

std::string bank_to_string(const AngleSetBank& bank) {
  std::ostringstream out;
  write_bank(out, bank);
  return out.str();
}

AngleSetBank bank_from_string(const std::string& text) {
  std::istringstream in(text);
  return read_bank(in);
}

void save_bank(const std::filesystem::path& path, const AngleSetBank& bank) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_bank(out, bank);
}

AngleSetBank load_bank(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open bank file " + path.string());
  return read_bank(in);
}

}  // namespace scanpath
