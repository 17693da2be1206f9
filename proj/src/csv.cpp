#include "povar/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace povar {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc())
    throw std::runtime_error("number formatting failed");
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    throw std::invalid_argument("bad number: '" + s + "'");
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  return f;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

long parse_index(const std::string& s, const char* what) {
  long v = -1;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || v < 0)
    throw std::invalid_argument(std::string("bad ") + what + ": '" + s + "'");
  return v;
}

}  // namespace

void write_trajectory_csv(const std::string& path, const std::vector<Trajectory>& trajs) {
  std::ostringstream body;
  body << "r,t,d,x,pi,y\n";
  for (std::size_t r = 0; r < trajs.size(); ++r) {
    const Trajectory& tr = trajs[r];
    for (std::size_t t = 0; t < tr.X.rows(); ++t)
      for (std::size_t d = 0; d < tr.X.cols(); ++d)
        body << r << ',' << t << ',' << d << ',' << format_double(tr.X(t, d)) << ','
             << (tr.Pi(t, d) == 1.0 ? '1' : '0') << ',' << format_double(tr.Y(t, d))
             << '\n';
  }
  open_out(path) << body.str();
}

std::vector<Trajectory> read_trajectory_csv(const std::string& path) {
  auto lines = read_lines(path);
  if (lines.empty() || lines[0] != "r,t,d,x,pi,y")
    throw std::invalid_argument(path + ": expected header r,t,d,x,pi,y");

  long nr = 0, nt = 0, nd = 0;
  struct Cell {
    long r, t, d;
    double x, pi, y;
  };
  std::vector<Cell> cells;
  cells.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto fields = split_csv_line(lines[i]);
    if (fields.size() != 6)
      throw std::invalid_argument(path + ": bad column count on data line " +
                                  std::to_string(i));
    Cell c{parse_index(fields[0], "r"), parse_index(fields[1], "t"),
           parse_index(fields[2], "d"), parse_double(fields[3]),
           parse_double(fields[4]),     parse_double(fields[5])};
    if (c.pi != 0.0 && c.pi != 1.0)
      throw std::invalid_argument(path + ": pi must be 0 or 1");
    nr = std::max(nr, c.r + 1);
    nt = std::max(nt, c.t + 1);
    nd = std::max(nd, c.d + 1);
    cells.push_back(c);
  }
  if (cells.empty()) throw std::invalid_argument(path + ": no data rows");
  if (cells.size() != static_cast<std::size_t>(nr) * static_cast<std::size_t>(nt) *
                          static_cast<std::size_t>(nd))
    throw std::invalid_argument(path + ": incomplete trajectory table");

  std::vector<Trajectory> out(static_cast<std::size_t>(nr));
  for (auto& tr : out) {
    tr.X = Matrix(static_cast<std::size_t>(nt), static_cast<std::size_t>(nd));
    tr.Pi = Matrix(static_cast<std::size_t>(nt), static_cast<std::size_t>(nd));
    tr.Y = Matrix(static_cast<std::size_t>(nt), static_cast<std::size_t>(nd));
  }
  for (const Cell& c : cells) {
    Trajectory& tr = out[static_cast<std::size_t>(c.r)];
    tr.X(c.t, c.d) = c.x;
    tr.Pi(c.t, c.d) = c.pi;
    tr.Y(c.t, c.d) = c.y;
  }
  return out;
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::ostringstream body;
  body << "d1,d2,value\n";
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      body << i << ',' << j << ',' << format_double(m(i, j)) << '\n';
  open_out(path) << body.str();
}

Matrix read_matrix_csv(const std::string& path) {
  auto lines = read_lines(path);
  if (lines.empty() || lines[0] != "d1,d2,value")
    throw std::invalid_argument(path + ": expected header d1,d2,value");
  struct Cell {
    long i, j;
    double v;
  };
  std::vector<Cell> cells;
  long ni = 0, nj = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto fields = split_csv_line(lines[i]);
    if (fields.size() != 3)
      throw std::invalid_argument(path + ": bad column count on data line " +
                                  std::to_string(i));
    Cell c{parse_index(fields[0], "d1"), parse_index(fields[1], "d2"),
           parse_double(fields[2])};
    ni = std::max(ni, c.i + 1);
    nj = std::max(nj, c.j + 1);
    cells.push_back(c);
  }
  if (cells.empty()) throw std::invalid_argument(path + ": no data rows");
  Matrix m(static_cast<std::size_t>(ni), static_cast<std::size_t>(nj));
  for (const Cell& c : cells) m(c.i, c.j) = c.v;
  return m;
}

}  // namespace povar
