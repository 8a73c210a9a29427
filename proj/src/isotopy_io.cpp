#include "tori/isotopy_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "parallel.hpp"

namespace tori {

namespace {

constexpr char kMagic[8] = {'T', 'O', 'R', 'I', 'I', 'S', 'O', '\0'};

template <class T>
void put(std::string& out, T v) {
  char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  out.append(b, sizeof(T));
}

class Reader {
 public:
  explicit Reader(const std::string& s) : s_(s) {}
  template <class T>
  T get(const char* what) {
    need(sizeof(T), what);
    T v;
    std::memcpy(&v, s_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::string bytes(std::size_t n, const char* what) {
    need(n, what);
    std::string out = s_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return s_.size() - pos_; }

 private:
  void need(std::size_t n, const char* what) {
    if (n > remaining()) throw FormatError(std::string("truncated isotopy file while reading ") + what);
  }
  const std::string& s_;
  std::size_t pos_ = 0;
};

std::uint32_t crc(const std::string& s, std::size_t from, std::size_t to) {
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(s.data() + from), static_cast<uInt>(to - from)));
}

void put_field(std::string& out, const FieldSamples& f) {
  for (const auto& c : f)
    out.append(reinterpret_cast<const char*>(c.v.data()), c.v.size() * sizeof(double));
}

std::shared_ptr<FieldSamples> get_field(Reader& r, const FlatTorus& m, const char* what) {
  auto f = std::make_shared<FieldSamples>(m.dim(), ScalarField(m));
  for (auto& c : *f) {
    const std::string b = r.bytes(c.v.size() * sizeof(double), what);
    std::memcpy(c.v.data(), b.data(), b.size());
  }
  return f;
}

double max_diff(const FieldSamples& a, const FieldSamples& b) {
  double e = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c)
    for (std::size_t i = 0; i < a[c].v.size(); ++i) e = std::max(e, std::abs(a[c].v[i] - b[c].v[i]));
  return e;
}

}  // namespace

FieldSamples resample_field(const FieldSamples& f, const FlatTorus& target) {
  FieldSamples out(f.size(), ScalarField(target));
  detail::parallel_for(target.size(), [&](std::size_t i) {
    const Point x = target.point(i);
    for (std::size_t c = 0; c < f.size(); ++c) out[c].v[i] = interpolate(f[c], x);
  });
  return out;
}

void save_isotopy(const Isotopy& phi, const std::string& path) {
  if (phi.size() == 0) throw std::invalid_argument("cannot save an empty isotopy");
  const FlatTorus& m = phi.torus;
  nlohmann::json h;
  h["dim"] = m.dim();
  h["n"] = m.n();
  h["symplectic"] = m.symplectic();
  h["volume"] = m.volume();
  h["provenance"] = phi.provenance;
  std::map<const FieldSamples*, int> vel_index;
  std::vector<const FieldSamples*> vels;
  nlohmann::json slices = nlohmann::json::array();
  for (const Slice& s : phi.slices) {
    int vi = -1;
    if (s.vel) {
      auto it = vel_index.find(s.vel.get());
      if (it == vel_index.end()) {
        it = vel_index.emplace(s.vel.get(), static_cast<int>(vels.size())).first;
        vels.push_back(s.vel.get());
      }
      vi = it->second;
    }
    slices.push_back({{"t", s.t}, {"sigma", s.sigma}, {"rate", s.rate}, {"weight", s.weight},
                      {"segment", s.segment}, {"vel", vi}});
  }
  h["slices"] = slices;
  h["velocities"] = vels.size();
  const std::string header = h.dump();

  std::string out(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kIsotopyFormatVersion);
  put<std::uint64_t>(out, header.size());
  const std::size_t body = out.size();
  out += header;
  for (const Slice& s : phi.slices) put_field(out, *s.disp);
  for (const FieldSamples* v : vels) put_field(out, *v);
  put<std::uint32_t>(out, crc(out, body, out.size()));

  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw std::runtime_error("write failed for " + path);
}

LoadResult load_isotopy(const std::string& path, int target_n) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  const std::string data = ss.str();

  Reader r(data);
  const std::string magic = r.bytes(sizeof(kMagic), "magic");
  if (std::memcmp(magic.data(), kMagic, sizeof(kMagic)) != 0) throw FormatError("not an isotopy file (bad magic)");
  const auto version = r.get<std::uint32_t>("version");
  if (version != kIsotopyFormatVersion)
    throw FormatError("isotopy format version " + std::to_string(version) + " not supported (expected " +
                      std::to_string(kIsotopyFormatVersion) + ")");
  const auto hlen = r.get<std::uint64_t>("header length");
  const std::size_t body = r.pos();
  if (hlen > r.remaining()) throw FormatError("truncated isotopy file while reading header");
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(r.bytes(hlen, "header"));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("corrupt isotopy header: ") + e.what());
  }

  LoadResult out;
  try {
    const FlatTorus m(h.at("dim").get<int>(), h.at("n").get<int>(), h.at("symplectic").get<bool>(),
                      h.at("volume").get<double>());
    out.source_n = m.n();
    const auto& js = h.at("slices");
    const std::size_t nvel = h.at("velocities").get<std::size_t>();
    const std::size_t expect = (js.size() + nvel) * m.dim() * m.size() * sizeof(double) + sizeof(std::uint32_t);
    if (r.remaining() < expect) throw FormatError("truncated isotopy file: payload shorter than header declares");
    if (r.remaining() > expect) throw FormatError("corrupt isotopy file: trailing bytes after payload");
    const std::uint32_t want = crc(data, body, data.size() - sizeof(std::uint32_t));
    std::uint32_t got;
    std::memcpy(&got, data.data() + data.size() - sizeof(got), sizeof(got));
    if (want != got) throw FormatError("corrupt isotopy file: checksum mismatch");

    out.path.torus = m;
    out.path.provenance = h.at("provenance").get<std::string>();
    std::vector<std::shared_ptr<const FieldSamples>> disps;
    for (std::size_t k = 0; k < js.size(); ++k) disps.push_back(get_field(r, m, "slice"));
    std::vector<std::shared_ptr<const FieldSamples>> vels;
    for (std::size_t k = 0; k < nvel; ++k) vels.push_back(get_field(r, m, "velocity"));
    for (std::size_t k = 0; k < js.size(); ++k) {
      const auto& j = js[k];
      Slice s;
      s.t = j.at("t").get<double>();
      s.sigma = j.at("sigma").get<double>();
      s.rate = j.at("rate").get<double>();
      s.weight = j.at("weight").get<double>();
      s.segment = j.at("segment").get<int>();
      s.disp = disps[k];
      const int vi = j.at("vel").get<int>();
      if (vi >= static_cast<int>(nvel)) throw FormatError("corrupt isotopy header: velocity index out of range");
      if (vi >= 0) s.vel = vels[vi];
      out.path.slices.push_back(s);
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("corrupt isotopy header: ") + e.what());
  }

  if (target_n > 0 && target_n != out.source_n) {
    const FlatTorus& src = out.path.torus;
    const FlatTorus dst(src.dim(), target_n, src.symplectic(), src.volume());
    Isotopy res;
    res.torus = dst;
    res.provenance = out.path.provenance;
    std::map<const FieldSamples*, std::shared_ptr<const FieldSamples>> moved;
    auto move = [&](const std::shared_ptr<const FieldSamples>& f) -> std::shared_ptr<const FieldSamples> {
      if (!f) return nullptr;
      auto it = moved.find(f.get());
      if (it != moved.end()) return it->second;
      auto g = std::make_shared<const FieldSamples>(resample_field(*f, dst));
      out.roundtrip_error = std::max(out.roundtrip_error, max_diff(*f, resample_field(*g, src)));
      moved.emplace(f.get(), g);
      return g;
    };
    for (const Slice& s : out.path.slices) {
      Slice n = s;
      n.disp = move(s.disp);
      n.vel = move(s.vel);
      res.slices.push_back(n);
    }
    out.path = std::move(res);
    out.resampled = true;
  }
  return out;
}

}  // namespace tori
