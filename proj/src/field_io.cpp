#include "tgf/field_io.hpp"

#include <cstdint>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace tgf {

namespace {
constexpr char kMagic[4] = {'T', 'G', 'F', '1'};
}

void save_field(const VelocityField& f, const std::string& path) {
  nlohmann::json h;
  h["Lx"] = f.grid.Lx;
  h["Ly"] = f.grid.Ly;
  h["nx"] = f.grid.nx;
  h["ny"] = f.grid.ny;
  h["hx"] = f.grid.hx;
  h["hy"] = f.grid.hy;
  h["layout"] = "u-block,v-block,row-major,f64le";
  const std::string hs = h.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_field: cannot open " + path);
  out.write(kMagic, 4);
  const std::uint32_t n = static_cast<std::uint32_t>(hs.size());
  out.write(reinterpret_cast<const char*>(&n), 4);
  out.write(hs.data(), hs.size());
  out.write(reinterpret_cast<const char*>(f.u.data()),
            static_cast<std::streamsize>(f.u.size() * sizeof(double)));
  out.write(reinterpret_cast<const char*>(f.v.data()),
            static_cast<std::streamsize>(f.v.size() * sizeof(double)));
  if (!out) throw std::runtime_error("save_field: write failed for " + path);
}

VelocityField load_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_field: cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != std::string(kMagic, 4))
    throw std::runtime_error("load_field: bad magic in " + path);
  std::uint32_t n = 0;
  in.read(reinterpret_cast<char*>(&n), 4);
  std::string hs(n, '\0');
  in.read(hs.data(), n);
  nlohmann::json h = nlohmann::json::parse(hs);
  Grid g = build_grid(h.at("Lx").get<double>(), h.at("Ly").get<double>(),
                      h.at("nx").get<int>(), h.at("ny").get<int>());
  VelocityField f(g);
  in.read(reinterpret_cast<char*>(f.u.data()),
          static_cast<std::streamsize>(f.u.size() * sizeof(double)));
  in.read(reinterpret_cast<char*>(f.v.data()),
          static_cast<std::streamsize>(f.v.size() * sizeof(double)));
  if (!in) throw std::runtime_error("load_field: truncated payload in " + path);
  return f;
}

void write_field_csv(const VelocityField& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_field_csv: cannot open " + path);
  out << "x,y,u,v\n";
  std::vector<double> uc, vc;
  center_velocity(f, uc, vc);
  const Grid& g = f.grid;
  out.precision(17);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      out << g.xc(i) << ',' << g.yc(j) << ',' << uc[g.ic(i, j)] << ',' << vc[g.ic(i, j)] << '\n';
}

}  // namespace tgf
