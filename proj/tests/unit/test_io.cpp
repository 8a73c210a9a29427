#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "tori/examples.hpp"
#include "tori/isotopy_io.hpp"

using namespace tori;
namespace fs = std::filesystem;

namespace {

std::string temp_path(const std::string& name) {
  return (fs::temp_directory_path() / ("tori_test_io_" + std::to_string(::getpid()) + "_" + name)).string();
}

std::string slurp(const std::string& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void dump(const std::string& p, const std::string& bytes) {
  std::ofstream f(p, std::ios::binary);
  f << bytes;
}

double max_diff(const Isotopy& a, const Isotopy& b) {
  double e = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t c = 0; c < a.slices[k].disp->size(); ++c)
      for (std::size_t i = 0; i < a.torus.size(); ++i)
        e = std::max(e, std::abs((*a.slices[k].disp)[c].v[i] - (*b.slices[k].disp)[c].v[i]));
  return e;
}

void check_rejects(const std::string& bytes, const std::string& fragment) {
  const std::string p = temp_path("bad");
  dump(p, bytes);
  try {
    load_isotopy(p);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK_MESSAGE(std::string(e.what()).find(fragment) != std::string::npos, e.what());
  }
  fs::remove(p);
}

}  // namespace

TEST_CASE("round trip is lossless") {
  const FlatTorus m(2, 16);
  const Isotopy phi = flow(examples::x_shear(0.3, 0.1), 50, m);
  const std::string p = temp_path("rt");
  save_isotopy(phi, p);
  const LoadResult r = load_isotopy(p);
  CHECK_FALSE(r.resampled);
  CHECK(r.source_n == 16);
  REQUIRE(r.path.size() == phi.size());
  CHECK(max_diff(phi, r.path) == 0.0);
  CHECK(r.path.provenance == phi.provenance);
  CHECK(r.path.has_velocity() == phi.has_velocity());
  for (std::size_t k = 0; k < phi.size(); ++k) {
    CHECK(r.path.slices[k].t == phi.slices[k].t);
    CHECK(r.path.slices[k].weight == phi.slices[k].weight);
  }
  // Saving the loaded path reproduces the file byte for byte.
  const std::string q = temp_path("rt2");
  save_isotopy(r.path, q);
  CHECK(slurp(p) == slurp(q));
  fs::remove(p);
  fs::remove(q);
}

TEST_CASE("cross-resolution load") {
  const FlatTorus m(2, 32);
  const Isotopy phi = flow(examples::x_shear(0.2), 50, m);
  const std::string p = temp_path("res");
  save_isotopy(phi, p);
  const LoadResult r = load_isotopy(p, 64);
  CHECK(r.resampled);
  CHECK(r.path.torus.n() == 64);
  CHECK(r.roundtrip_error < 1e-4);
  const Point x{0.3, 0.45};
  const Point a = phi.apply(phi.size() - 1, x), b = r.path.apply(r.path.size() - 1, x);
  CHECK(std::abs(a[0] - b[0]) < 1e-4);
  CHECK_FALSE(load_isotopy(p, 32).resampled);
  fs::remove(p);
}

TEST_CASE("malformed files are rejected") {
  const FlatTorus m(2, 8);
  const std::string p = temp_path("src");
  save_isotopy(identity_path(m, 50), p);
  const std::string good = slurp(p);
  fs::remove(p);

  check_rejects(good.substr(0, 4), "truncated");
  check_rejects(good.substr(0, good.size() - 9), "truncated");
  check_rejects(good + "x", "trailing bytes");

  std::string magic = good;
  magic[0] = 'X';
  check_rejects(magic, "bad magic");

  std::string version = good;
  const std::uint32_t v = kIsotopyFormatVersion + 1;
  std::memcpy(version.data() + 8, &v, sizeof v);
  check_rejects(version, "version");

  std::string flipped = good;
  flipped[good.size() - 20] ^= 0x01;
  check_rejects(flipped, "checksum");

  std::string header = good;
  header[20] = '#';
  check_rejects(header, "corrupt isotopy header");

  CHECK_THROWS_AS(load_isotopy(temp_path("missing")), std::runtime_error);
  CHECK_THROWS(save_isotopy(Isotopy{}, temp_path("empty")));
}
