#include "arnold/field_io.hpp"

#include <bit>
#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>

namespace arnold {

namespace {

static_assert(std::endian::native == std::endian::little, "field files assume a little-endian host");

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("truncated field file");
  return v;
}

}  // namespace

void write_field(const std::filesystem::path& path, const ScalarField& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  const auto& d = f.grid();
  os.write("SFLD", 4);
  put(os, static_cast<std::uint32_t>(d.nx()));
  put(os, static_cast<std::uint32_t>(d.ny()));
  put(os, d.h());
  put(os, d.x0());
  put(os, d.y0());
  os.write(reinterpret_cast<const char*>(d.codes().data()), static_cast<std::streamsize>(d.size()));
  for (std::size_t p = 0; p < d.size(); ++p)
    if (!d.is_exterior(p)) put(os, f[p]);
  if (!os) throw std::runtime_error("write failed for " + path.string());
}

RawField read_raw_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "SFLD", 4) != 0) throw std::runtime_error(path.string() + ": not a field file");
  RawField r;
  r.nx = get<std::uint32_t>(is);
  r.ny = get<std::uint32_t>(is);
  r.h = get<double>(is);
  r.x0 = get<double>(is);
  r.y0 = get<double>(is);
  if (r.nx == 0 || r.ny == 0 || r.nx * r.ny > (1u << 28)) throw std::runtime_error("implausible field dimensions");
  r.codes.resize(r.nx * r.ny);
  is.read(reinterpret_cast<char*>(r.codes.data()), static_cast<std::streamsize>(r.codes.size()));
  if (!is) throw std::runtime_error("truncated field file");
  r.values.assign(r.codes.size(), 0.0);
  for (std::size_t p = 0; p < r.codes.size(); ++p)
    if (r.codes[p] != kExteriorCode) r.values[p] = get<double>(is);
  return r;
}

ScalarField read_field(const std::filesystem::path& path, const DomainPtr& domain) {
  RawField r = read_raw_field(path);
  if (r.nx != domain->nx() || r.ny != domain->ny() || r.codes != domain->codes())
    throw DomainError(path.string() + ": field layout does not match the domain");
  return ScalarField(domain, std::move(r.values));
}

ScalarField read_field_standalone(const std::filesystem::path& path) {
  RawField r = read_raw_field(path);
  auto d = std::make_shared<GridDomain>(r.nx, r.ny, r.h, r.x0, r.y0, std::move(r.codes));
  return ScalarField(d, std::move(r.values));
}

MaskSpec read_pgm_mask(const std::filesystem::path& path, double h, double x0, double y0) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  auto token = [&]() {
    std::string t;
    char c;
    while (is.get(c)) {
      if (c == '#') {
        std::string skip;
        std::getline(is, skip);
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!t.empty()) break;
        continue;
      }
      t.push_back(c);
    }
    return t;
  };
  if (token() != "P5") throw DomainError(path.string() + ": expected binary PGM (P5)");
  MaskSpec m;
  m.nx = std::stoul(token());
  m.ny = std::stoul(token());
  const unsigned long maxval = std::stoul(token());
  if (maxval == 0 || maxval > 255) throw DomainError("only 8-bit PGM masks are supported");
  std::vector<unsigned char> pix(m.nx * m.ny);
  is.read(reinterpret_cast<char*>(pix.data()), static_cast<std::streamsize>(pix.size()));
  if (!is) throw DomainError("truncated PGM data");
  m.h = h;
  m.x0 = x0;
  m.y0 = y0;
  m.fluid.resize(pix.size());
  // PGM rows run top to bottom; grid rows run bottom to top.
  for (std::size_t j = 0; j < m.ny; ++j)
    for (std::size_t i = 0; i < m.nx; ++i) m.fluid[j * m.nx + i] = pix[(m.ny - 1 - j) * m.nx + i] != 0;
  return m;
}

MaskSpec parse_rle_mask(const std::string& text) {
  std::istringstream is(text);
  MaskSpec m;
  std::string header;
  while (std::getline(is, header)) {
    if (!header.empty() && header[0] != '%') break;
  }
  {
    std::istringstream hs(header);
    if (!(hs >> m.nx >> m.ny >> m.h >> m.x0 >> m.y0)) throw DomainError("bad run-length mask header");
  }
  std::vector<std::vector<bool>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '%') continue;
    std::vector<bool> row;
    std::size_t count = 0;
    bool have = false;
    for (char c : line) {
      if (std::isdigit(static_cast<unsigned char>(c))) {
        count = count * 10 + static_cast<std::size_t>(c - '0');
        have = true;
      } else if (c == '#' || c == '.') {
        row.insert(row.end(), have ? count : 1, c == '#');
        count = 0;
        have = false;
      } else if (!std::isspace(static_cast<unsigned char>(c))) {
        throw DomainError(std::string("bad character in run-length mask: ") + c);
      }
    }
    if (row.size() != m.nx) throw DomainError("run-length row has wrong width");
    rows.push_back(std::move(row));
  }
  if (rows.size() != m.ny) throw DomainError("run-length mask has wrong number of rows");
  m.fluid.resize(m.nx * m.ny);
  // First text row is the top of the grid.
  for (std::size_t j = 0; j < m.ny; ++j)
    for (std::size_t i = 0; i < m.nx; ++i) m.fluid[j * m.nx + i] = rows[m.ny - 1 - j][i];
  return m;
}

MaskSpec read_rle_mask(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_rle_mask(ss.str());
}

DomainPtr load_mask_domain(const std::filesystem::path& path, double h) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  char head[2] = {0, 0};
  is.read(head, 2);
  MaskSpec m = (head[0] == 'P' && head[1] == '5') ? read_pgm_mask(path, h, 0.0, 0.0) : read_rle_mask(path);
  return label_components(m.nx, m.ny, m.h, m.x0, m.y0, m.fluid);
}

}  // namespace arnold
