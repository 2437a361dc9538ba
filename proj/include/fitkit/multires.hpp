#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "fitkit/core.hpp"

namespace fitkit {

enum class Basis { haar, coslet };

Basis parse_basis(const std::string& name);
std::string to_string(Basis b);

struct Subbands1D {
  std::vector<double> low;   // approximation L
  std::vector<double> high;  // detail H
  int level = 1;
  Basis basis = Basis::haar;
};

struct Subbands2D {
  Plane ll;  // approximation
  Plane lh;  // horizontal detail
  Plane hl;  // vertical detail
  Plane hh;  // diagonal detail
  int level = 1;
  Basis basis = Basis::haar;
};

// Haar pairs: l = (a + b) / 2, h = (b - a) / 2.
Subbands1D haar1d_forward(std::span<const double> s);
std::vector<double> haar1d_inverse(const Subbands1D& sb);

// Haar 2x2 blocks [a b; c d], every band divided by 4.
Subbands2D haar2d_forward(const Plane& p);
Plane haar2d_inverse(const Subbands2D& sb);

// Orthonormal DCT-II and its inverse (DCT-III).
std::vector<double> dct1d(std::span<const double> x);
std::vector<double> idct1d(std::span<const double> c);
Plane dct2d(const Plane& p);
Plane idct2d(const Plane& c);

// Coslets: split the DCT spectrum into halves/quadrants, inverse-transform
// each piece at half size.
Subbands1D coslet1d_forward(std::span<const double> s);
std::vector<double> coslet1d_inverse(const Subbands1D& sb);
Subbands2D coslet2d_forward(const Plane& p);
Plane coslet2d_inverse(const Subbands2D& sb);

Subbands1D forward1d(std::span<const double> s, Basis basis);
std::vector<double> inverse1d(const Subbands1D& sb);
Subbands2D forward2d(const Plane& p, Basis basis);
Plane inverse2d(const Subbands2D& sb);

// Multi-level decomposition: only the approximation band is split again.
// details[0] holds level 1 (finest).
struct Pyramid1D {
  std::vector<double> approx;
  std::vector<std::vector<double>> details;
  Basis basis = Basis::haar;
  int levels() const { return static_cast<int>(details.size()); }
};

struct Pyramid2D {
  Plane approx;
  std::vector<std::array<Plane, 3>> details;  // {LH, HL, HH} per level
  Basis basis = Basis::haar;
  int levels() const { return static_cast<int>(details.size()); }
};

Pyramid1D split_levels(std::span<const double> s, Basis basis, int levels);
std::vector<double> merge_levels(const Pyramid1D& pyr);
Pyramid2D split_levels(const Plane& p, Basis basis, int levels);
Plane merge_levels(const Pyramid2D& pyr);

}  // namespace fitkit
