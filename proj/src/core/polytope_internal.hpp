#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "polarity/geometry.hpp"

namespace polarity::detail {

// Visits every k-subset of {0..m-1} in lexicographic order. Throws
// InvalidArgument when the subset count exceeds `cap`.
void for_each_combination(int m, int k, const std::function<void(const std::vector<int>&)>& fn,
                          double cap = 5e6);

// Facets c.x <= 1 and vertices of conv{+-g_i}.
PolytopeData symmetric_hull(const Mat& generators);

// Vertices of {A x <= b}; the facet list is the deduplicated input.
PolytopeData h_vertices(const Mat& normals, const Vec& offsets);

// True when {A x <= b} (b > 0) is bounded: the recession cone {A d <= 0} is {0}.
bool h_is_bounded(const Mat& normals);

// Counter-clockwise hull (Andrew's monotone chain).
std::vector<Eigen::Vector2d> convex_hull_2d(std::vector<Eigen::Vector2d> pts);
double polygon_area(const std::vector<Eigen::Vector2d>& hull);

// Volume of a 3D polytope from its vertices and facets (fan of tetrahedra
// from the vertex centroid).
double polytope_volume_3d(const PolytopeData& data);

// Simplex decomposition used by quadrature: each simplex is (n+1) x n.
std::vector<Mat> simplex_decomposition(const PolytopeData& data, int dim);

// Vertices of any region (box corners, polytope vertices) with shift applied.
Mat region_vertices(const TranslatedBody& region);

// Adds int over the simplex of e^{-i x.z} (Gauss-Legendre order m on the
// collapsed cube) to out[j] for every z_j.
void simplex_transform(const Mat& simplex, const std::vector<Vec>& zs, int m,
                       std::vector<std::complex<double>>& out);

}  // namespace polarity::detail
