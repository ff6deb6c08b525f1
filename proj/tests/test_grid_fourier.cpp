#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>

#include "anisolp/field.hpp"
#include "anisolp/fld_io.hpp"
#include "anisolp/generators.hpp"
#include "anisolp/rng.hpp"

using namespace anisolp;

namespace {

// O(Ntot^2) transform straight from the definition; the oracle every fast
// path is checked against.
Spectrum dft_reference(const Field& f) {
  Spectrum s(f.lat);
  const int n = f.lat.dim();
  std::vector<int> xi_idx(n), x_idx(n);
  const double scale = 1.0 / static_cast<double>(f.lat.total());
  for (std::size_t r = 0; r < s.c.size(); ++r) {
    f.lat.unravel(r, xi_idx.data());
    cd acc(0, 0);
    for (std::size_t q = 0; q < f.v.size(); ++q) {
      f.lat.unravel(q, x_idx.data());
      double phase = 0;
      for (int d = 0; d < n; ++d)
        phase += f.lat.freq_of(d, xi_idx[d]) * f.lat.x_coord(d, x_idx[d]);
      acc += std::polar(1.0, phase) * f.v[q];
    }
    s.c[r] = scale * acc;
  }
  return s;
}

double max_coeff_dist(const Spectrum& a, const Spectrum& b) {
  double m = 0;
  for (std::size_t r = 0; r < a.c.size(); ++r) m = std::max(m, std::abs(a.c[r] - b.c[r]));
  return m;
}

}  // namespace

TEST_CASE("splitmix64 reference streams", "[grid-fourier][rng]") {
  // Values computed once from the published splitmix64 recurrence and frozen.
  SplitMix64 a(0);
  CHECK(a.next() == 0xe220a8397b1dcdafull);
  CHECK(a.next() == 0x6e789e6aa1b965f4ull);
  CHECK(a.next() == 0x06c45d188009454full);
  CHECK(a.next() == 0xf88bb8a8724c81ecull);

  SplitMix64 b(42);
  CHECK(b.next() == 0xbdd732262feb6e95ull);
  CHECK(b.next() == 0x28efe333b266f103ull);

  SplitMix64 c(0x123456789abcdef0ull);
  CHECK(c.next() == 0x161922c645ce50e8ull);
  CHECK(c.next() == 0xad760cafa1697b60ull);

  SplitMix64 u(42);
  CHECK(u.uniform01() == 0.7415648787718233);

  // split() derives the child from the parent's next output and leaves the
  // parent stream otherwise unchanged
  SplitMix64 p(42);
  SplitMix64 child = p.split();
  CHECK(child.state == 0xbdd732262feb6e95ull);
  CHECK(p.next() == 0x28efe333b266f103ull);
}

TEST_CASE("lattice validation and index maps", "[grid-fourier]") {
  CHECK_THROWS_AS(Lattice({7, 8}, 1), std::invalid_argument);
  CHECK_THROWS_AS(Lattice({2, 8}, 1), std::invalid_argument);
  CHECK_THROWS_AS(Lattice({}, 0), std::invalid_argument);

  Lattice lat({8, 6}, 1);
  CHECK(lat.total() == 48);
  CHECK(lat.freq_of(0, 0) == 0);
  CHECK(lat.freq_of(0, 3) == 3);
  CHECK(lat.freq_of(0, 4) == -4);  // Nyquist slot carries the negative frequency
  CHECK(lat.freq_of(0, 7) == -1);
  CHECK(lat.slot_of_freq(0, -4) == 4);
  CHECK(lat.slot_of_freq(1, 2) == 2);
  CHECK_THROWS_AS(lat.slot_of_freq(1, 3), std::out_of_range);
  CHECK(lat.wrap_freq(0, 9) == 1);
  CHECK(lat.wrap_freq(0, -5) == 3);
  CHECK(lat.wrap_freq(0, 4) == -4);

  int idx[2];
  lat.unravel(17, idx);
  CHECK(idx[0] == 2);
  CHECK(idx[1] == 5);
  CHECK(lat.ravel(idx) == 17);
}

TEST_CASE("transform of the delta and of plane waves", "[grid-fourier]") {
  Lattice lat({8, 8}, 1);
  Field delta(lat);
  delta.v[0] = cd(1, 0);
  Spectrum s = dft(delta);
  for (std::size_t r = 0; r < s.c.size(); ++r) {
    CHECK(std::abs(s.c[r] - cd(1.0 / 64.0, 0)) < 1e-15);
  }

  // e^{i k.x} has coefficient 1 in the slot of -k (wrapped), zero elsewhere
  const std::vector<int> k{3, 2};
  Field f = gen_mode(lat, k);
  Spectrum sf = dft(f);
  int hot[2] = {lat.slot_of_freq(0, lat.wrap_freq(0, -k[0])),
                lat.slot_of_freq(1, lat.wrap_freq(1, -k[1]))};
  const std::size_t hot_r = lat.ravel(hot);
  for (std::size_t r = 0; r < sf.c.size(); ++r) {
    const cd want = r == hot_r ? cd(1, 0) : cd(0, 0);
    CHECK(std::abs(sf.c[r] - want) < 1e-13);
  }

  // per-axis |xi| is preserved under the wrapped negation, Nyquist included
  CHECK(std::abs(lat.wrap_freq(0, -(-4))) == 4);
}

TEST_CASE("fast transform matches the definition, pow2 and even non-pow2", "[grid-fourier]") {
  for (const Lattice& lat : {Lattice({8, 8}, 1), Lattice({8, 6}, 1), Lattice({4, 6, 4}, 2)}) {
    Field f = gen_random_smooth(lat, 42);
    const Spectrum fast = dft(f);
    const Spectrum slow = dft_reference(f);
    CHECK(max_coeff_dist(fast, slow) < 1e-12);
  }
}

TEST_CASE("round trip and Parseval", "[grid-fourier]") {
  Lattice lat({16, 16}, 1);
  Field f = gen_random_smooth(lat, 7);
  Field g = idft(dft(f));
  CHECK(linf_dist(f, g) < 1e-13);

  const Spectrum s = dft(f);
  std::vector<double> c2(s.c.size()), f2(f.v.size());
  for (std::size_t r = 0; r < s.c.size(); ++r) c2[r] = std::norm(s.c[r]);
  for (std::size_t r = 0; r < f.v.size(); ++r) f2[r] = std::norm(f.v[r]);
  const double lhs = pairwise_sum(c2);
  const double rhs = pairwise_sum(f2) / static_cast<double>(f.v.size());
  CHECK(lhs == Catch::Approx(rhs).epsilon(1e-12));

  // non-pow2 axis goes through the quadratic fallback; same identities hold
  Lattice lat2({8, 6}, 1);
  Field h = gen_random_smooth(lat2, 9);
  CHECK(linf_dist(h, idft(dft(h))) < 1e-13);
}

TEST_CASE("synthesis coefficients mirror the analysis ones", "[grid-fourier]") {
  Lattice lat({8, 6}, 1);
  Field f = gen_random_smooth(lat, 3);
  const Spectrum a = dft(f);
  const Spectrum t = synthesis_coeffs(f);
  std::vector<int> idx(2), neg(2);
  int slot[2];
  for (std::size_t r = 0; r < t.c.size(); ++r) {
    lat.unravel(r, idx.data());
    for (int d = 0; d < 2; ++d)
      slot[d] = lat.slot_of_freq(d, lat.wrap_freq(d, -lat.freq_of(d, idx[d])));
    CHECK(std::abs(t.c[r] - a.c[lat.ravel(slot)]) < 1e-13);
  }
  CHECK(linf_dist(f, synth(synthesis_coeffs(f))) < 1e-13);
}

TEST_CASE("frequency-box partial sums via indicator multipliers", "[grid-fourier]") {
  Lattice lat({8, 8}, 1);
  Field f = gen_random_smooth(lat, 11);
  const Spectrum s = dft(f);

  auto in_box = [](const std::vector<int>& xi) {
    return std::abs(xi[0]) <= 2 && std::abs(xi[1]) <= 1;
  };
  Field viaMult = apply_multiplier(f, [&](const std::vector<int>& xi) {
    return in_box(xi) ? 1.0 : 0.0;
  });

  // direct partial synthesis over the box
  Field direct(lat);
  std::vector<int> xi_idx(2), x_idx(2);
  for (std::size_t q = 0; q < direct.v.size(); ++q) {
    lat.unravel(q, x_idx.data());
    cd acc(0, 0);
    for (std::size_t r = 0; r < s.c.size(); ++r) {
      lat.unravel(r, xi_idx.data());
      std::vector<int> xi{lat.freq_of(0, xi_idx[0]), lat.freq_of(1, xi_idx[1])};
      if (!in_box(xi)) continue;
      double phase = 0;
      for (int d = 0; d < 2; ++d) phase -= xi[d] * lat.x_coord(d, x_idx[d]);
      acc += s.c[r] * std::polar(1.0, phase);
    }
    direct.v[q] = acc;
  }
  CHECK(linf_dist(viaMult, direct) < 1e-12);
}

TEST_CASE("smoothing scales compose and commute", "[grid-fourier]") {
  Lattice lat({16, 8}, 1);
  Field f = gen_random_smooth(lat, 5);

  Field a = bessel_potential(bessel_potential(f, 1.25), -0.75);
  Field b = bessel_potential(f, 0.5);
  CHECK(linf_dist(a, b) < 1e-12);

  Field c = bessel_potential(f, 0.0);
  CHECK(linf_dist(c, f) < 1e-12);

  Field d1 = bessel_potential(bessel_potential(f, 0.8), -1.3, WeightScope::Factor2);
  Field d2 = bessel_potential(bessel_potential(f, -1.3, WeightScope::Factor2), 0.8);
  CHECK(linf_dist(d1, d2) < 1e-12);
}

TEST_CASE("field file round trip is byte-identical", "[grid-fourier][cli]") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "anisolp_fld_test";
  fs::create_directories(dir);
  const std::string p1 = (dir / "a.fld").string();
  const std::string p2 = (dir / "b.fld").string();

  Lattice lat({8, 6}, 1);
  Field f = gen_random_smooth(lat, 123);
  write_fld(p1, f);
  Field g = read_fld(p1);
  CHECK(g.lat == f.lat);
  CHECK(linf_dist(f, g) == 0.0);

  write_fld(p2, g);
  std::ifstream i1(p1, std::ios::binary), i2(p2, std::ios::binary);
  const std::string b1((std::istreambuf_iterator<char>(i1)), std::istreambuf_iterator<char>());
  const std::string b2((std::istreambuf_iterator<char>(i2)), std::istreambuf_iterator<char>());
  CHECK(b1 == b2);
  CHECK(b1.substr(0, b1.find('\n')) == "FLD v1 n1=1 n2=1 sizes=8,6");

  fs::remove_all(dir);
}

TEST_CASE("pairwise reduction is exact on integers and order-stable", "[grid-fourier]") {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i + 1);
  CHECK(pairwise_sum(v) == 500500.0);

  // same bytes regardless of how callers might have chunked it by thread
  const double whole = pairwise_sum(v.data(), v.size());
  const double again = pairwise_sum(v.data(), v.size());
  CHECK(whole == again);
}
