#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "simpkit/chains.hpp"
#include "simpkit/io.hpp"

namespace simpkit {

// Octahedral 2-sphere: poles 0 and 5 over the square 1-2-3-4.
inline OrderedComplex octahedron() {
  std::vector<std::vector<std::string>> tri;
  for (int i = 1; i <= 4; ++i) {
    std::string a = std::to_string(i), b = std::to_string(i % 4 + 1);
    tri.push_back({"0", a, b});
    tri.push_back({"5", a, b});
  }
  return OrderedComplex({"0", "1", "2", "3", "4", "5"}, {}, tri);
}

// Minimal torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7.
inline OrderedComplex torus7() {
  std::vector<std::string> v;
  for (int i = 0; i < 7; ++i) v.push_back(std::to_string(i));
  std::vector<std::vector<std::string>> tri;
  for (int i = 0; i < 7; ++i) {
    tri.push_back({v[i], v[(i + 1) % 7], v[(i + 3) % 7]});
    tri.push_back({v[i], v[(i + 2) % 7], v[(i + 3) % 7]});
  }
  return OrderedComplex(v, {}, tri);
}

inline std::vector<std::string> fixture_names() {
  return {"sphere2", "sphere3", "torus7", "monopole_k-2", "monopole_k-1", "monopole_k0", "monopole_k1", "monopole_k2", "unit_triangle"};
}

namespace detail {

inline void expect_betti(const OrderedComplex& k, const std::vector<long>& betti, const std::string& name) {
  auto c = normalized_complex(ordered_to_sset(k, 3), 3);
  for (std::size_t n = 0; n < betti.size(); ++n) {
    auto h = homology(c, static_cast<int>(n));
    if (h.betti != betti[n] || !h.torsion.empty()) throw std::logic_error("fixture " + name + " fails its homology check");
  }
}

}  // namespace detail

// The named fixture as JSON, after it passes its module's own verification.
inline Json fixture(const std::string& name) {
  if (name == "sphere2" || name == "sphere3" || name == "torus7") {
    OrderedComplex k = name == "sphere2" ? standard_simplex_complex(3, true) : name == "sphere3" ? octahedron() : torus7();
    detail::expect_betti(k, name == "torus7" ? std::vector<long>{1, 2, 1} : std::vector<long>{1, 0, 1}, name);
    return io::to_json(k);
  }
  if (name.rfind("monopole_k", 0) == 0) {
    std::string tail = name.substr(10);
    int k = 0;
    if (tail == "-2" || tail == "-1" || tail == "0" || tail == "1" || tail == "2")
      k = std::stoi(tail);
    else
      throw std::invalid_argument("unknown fixture '" + name + "'");
    auto [cover, c] = monopole(k);
    if (!verify_cocycle_deg1(cover, c).ok()) throw std::logic_error("fixture " + name + " fails its cocycle check");
    return io::to_json(cover, c);
  }
  if (name == "unit_triangle") {
    Triangulation t = Triangulation::standard_simplex(2);
    if (t.signed_volume(t.tops()[0]) != Rat(1, 2)) throw std::logic_error("fixture unit_triangle has the wrong area");
    return io::to_json(t);
  }
  throw std::invalid_argument("unknown fixture '" + name + "'");
}

}  // namespace simpkit
