#include "tfpl/snapshot.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace tfpl {

namespace {

void append17(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

double parse_number(const std::string& text, int line, int column) {
  if (text.empty()) throw ParseError("empty number", line, column);
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || errno == ERANGE) {
    throw ParseError("invalid number '" + text + "'", line, column);
  }
  return v;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  os << text;
  if (!os) throw Error("failed writing '" + path + "'");
}

}  // namespace

std::string format_snapshot(const Field& field, double t, const OperatorParams& params) {
  std::string out;
  const int n = field_dim(field);
  out += "# n=" + std::to_string(n) + "\n# s=";
  append17(out, params.s);
  out += "\n# p=";
  append17(out, params.p);
  out += "\n# lambda=";
  append17(out, params.lambda);
  out += "\n# f=" + params.f.to_string() + "\n# h=";
  append17(out, field_spacing(field));
  out += "\n# t=";
  append17(out, t);
  if (const auto* g = std::get_if<GridField>(&field)) {
    out += "\n# layout=grid\n";
    const GridGeometry& geom = g->geometry();
    for (std::size_t i = 0; i < geom.size(); ++i) {
      const Point x = geom.point(i);
      for (int d = 0; d < n; ++d) {
        append17(out, x[d]);
        out += ',';
      }
      append17(out, (*g)[i]);
      out += '\n';
    }
  } else {
    const auto& r = std::get<RadialField>(field);
    out += "\n# layout=radial\n";
    for (std::size_t k = 0; k < r.size(); ++k) {
      append17(out, r.radii()[k]);
      out += ',';
      append17(out, r[k]);
      out += '\n';
    }
  }
  return out;
}

void save_snapshot(const Field& field, double t, const OperatorParams& params, const std::string& path) {
  write_file(path, format_snapshot(field, t, params));
}

Snapshot parse_snapshot(const std::string& text, std::optional<int> expected_n) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  std::map<std::string, std::pair<std::string, int>> header;
  std::vector<std::vector<double>> rows;
  std::vector<int> row_lines;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (!rows.empty()) throw ParseError("header line after data rows", lineno, 1);
      std::string body = line.substr(1);
      const auto b = body.find_first_not_of(' ');
      body = b == std::string::npos ? std::string() : body.substr(b);
      const auto eq = body.find('=');
      if (eq == std::string::npos) throw ParseError("header line must be '# key=value'", lineno, 1);
      header[body.substr(0, eq)] = {body.substr(eq + 1), lineno};
      continue;
    }
    std::vector<double> row;
    std::size_t pos = 0;
    while (true) {
      const auto comma = line.find(',', pos);
      const std::string cell = line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      row.push_back(parse_number(cell, lineno, static_cast<int>(pos) + 1));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    rows.push_back(std::move(row));
    row_lines.push_back(lineno);
  }

  auto need = [&](const std::string& key) -> const std::pair<std::string, int>& {
    const auto it = header.find(key);
    if (it == header.end()) throw ParseError("missing header '" + key + "'", lineno);
    return it->second;
  };
  OperatorParams params;
  double t = 0.0;
  std::optional<Field> field;
  const auto& nh = need("n");
  const double nd = parse_number(nh.first, nh.second, 1);
  if (nd != std::floor(nd) || nd < 1 || nd > 3) throw ParseError("n must be 1, 2 or 3", nh.second, 1);
  const int n = static_cast<int>(nd);
  if (expected_n && *expected_n != n) {
    throw ParseError("snapshot has n=" + std::to_string(n) + ", expected n=" + std::to_string(*expected_n),
                     nh.second, 1);
  }
  params.n = n;
  params.s = parse_number(need("s").first, need("s").second, 1);
  params.p = parse_number(need("p").first, need("p").second, 1);
  params.lambda = parse_number(need("lambda").first, need("lambda").second, 1);
  try {
    params.f = TemperingFunction::parse(need("f").first);
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), need("f").second, 1);
  }
  const double h = parse_number(need("h").first, need("h").second, 1);
  t = parse_number(need("t").first, need("t").second, 1);
  std::string layout = "grid";
  if (header.count("layout")) layout = header.at("layout").first;

  if (layout == "grid") {
    GridGeometryPtr geom;
    try {
      geom = make_grid(n, h);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), need("h").second, 1);
    }
    if (rows.size() != geom->size()) {
      throw ParseError("expected " + std::to_string(geom->size()) + " grid rows, found " +
                           std::to_string(rows.size()),
                       lineno);
    }
    std::vector<double> values(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& row = rows[i];
      if (row.size() != static_cast<std::size_t>(n) + 1) {
        throw ParseError("expected " + std::to_string(n + 1) + " columns", row_lines[i], 1);
      }
      const Point x = geom->point(i);
      for (int d = 0; d < n; ++d) {
        if (row[static_cast<std::size_t>(d)] != x[d]) {
          throw ParseError("node coordinates do not match the grid", row_lines[i], 1);
        }
      }
      values[i] = row.back();
      if (!geom->interior(i) && values[i] != 0.0) {
        throw ParseError("exterior node must hold 0", row_lines[i], 1);
      }
    }
    field = GridField(geom, std::move(values));
  } else if (layout == "radial") {
    std::vector<double> radii, values;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != 2) throw ParseError("radial rows need 2 columns", row_lines[i], 1);
      radii.push_back(rows[i][0]);
      values.push_back(rows[i][1]);
    }
    try {
      field = RadialField(n, std::move(radii), std::move(values));
    } catch (const Error& e) {
      throw ParseError(e.what(), lineno);
    }
  } else {
    throw ParseError("unknown layout '" + layout + "'", header.at("layout").second, 1);
  }
  return Snapshot{std::move(*field), t, params};
}

Snapshot load_snapshot(const std::string& path, std::optional<int> expected_n) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_snapshot(ss.str(), expected_n);
}

void save_residuals(const std::vector<std::pair<double, double>>& residuals, const std::string& path) {
  std::string out = "t,residual\n";
  for (const auto& [t, r] : residuals) {
    append17(out, t);
    out += ',';
    append17(out, r);
    out += '\n';
  }
  write_file(path, out);
}

}  // namespace tfpl
