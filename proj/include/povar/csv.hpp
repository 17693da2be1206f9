#pragma once
// CSV I/O with shortest-round-trip numeric formatting (std::to_chars), so
// identical data always serializes to identical bytes.

#include <string>
#include <vector>

#include "povar/matrix.hpp"
#include "povar/simulate.hpp"

namespace povar {

std::string format_double(double v);
double parse_double(const std::string& s);  // strict: whole token must parse

std::vector<std::string> split_csv_line(const std::string& line);

// Trajectory table: header r,t,d,x,pi,y; one row per (realization, time,
// dimension); y is 0 on unobserved entries.
void write_trajectory_csv(const std::string& path, const std::vector<Trajectory>& trajs);
std::vector<Trajectory> read_trajectory_csv(const std::string& path);

// Dense matrix table: header d1,d2,value, row-major.
void write_matrix_csv(const std::string& path, const Matrix& m);
Matrix read_matrix_csv(const std::string& path);

}  // namespace povar
