#include "ivxj/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace ivxj {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(trim(cur));
  return fields;
}

double parse_number(const std::string& field, const std::string& origin,
                    std::size_t lineno, const std::string& col) {
  const std::string t = trim(field);
  if (t.empty())
    throw InputError(origin + ":" + std::to_string(lineno) + ": missing value in column '" +
                     col + "'");
  try {
    std::size_t pos = 0;
    const double v = std::stod(t, &pos);
    if (pos != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw InputError(origin + ":" + std::to_string(lineno) + ": cannot parse '" + t +
                     "' in column '" + col + "'");
  }
}

long long parse_int(const std::string& field, const std::string& origin,
                    std::size_t lineno) {
  const std::string t = trim(field);
  long long v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
    throw InputError(origin + ":" + std::to_string(lineno) +
                     ": time stamp '" + t + "' is not an integer");
  return v;
}

}  // namespace

Panel read_panel_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file: " + path);
  return read_panel_csv(in, path);
}

Panel read_panel_csv(std::istream& in, const std::string& origin) {
  std::string line;
  if (!std::getline(in, line)) throw InputError(origin + ": empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line);
  if (header.size() < 4 || header[0] != "id" || header[1] != "time" || header[2] != "y")
    throw InputError(origin + ": header must be 'id,time,y,x1[,x2,...]'");
  const int k = static_cast<int>(header.size()) - 3;
  for (int j = 0; j < k; ++j)
    if (header[static_cast<std::size_t>(3 + j)] != "x" + std::to_string(j + 1))
      throw InputError(origin + ": regressor columns must be named x1,x2,... in order");

  struct Row {
    long long time;
    double y;
    std::vector<double> x;
  };
  // Preserve first-appearance order of ids; rows may arrive unsorted in time.
  std::vector<std::string> id_order;
  std::map<std::string, std::vector<Row>> rows;

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw InputError(origin + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(header.size()) + " fields, got " +
                       std::to_string(fields.size()));
    const std::string id = fields[0];
    if (id.empty())
      throw InputError(origin + ":" + std::to_string(lineno) + ": empty id");
    Row r;
    r.time = parse_int(fields[1], origin, lineno);
    r.y = parse_number(fields[2], origin, lineno, "y");
    r.x.resize(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j)
      r.x[static_cast<std::size_t>(j)] =
          parse_number(fields[static_cast<std::size_t>(3 + j)], origin, lineno,
                       header[static_cast<std::size_t>(3 + j)]);
    auto it = rows.find(id);
    if (it == rows.end()) {
      id_order.push_back(id);
      it = rows.emplace(id, std::vector<Row>{}).first;
    }
    it->second.push_back(std::move(r));
  }
  if (id_order.empty()) throw InputError(origin + ": no data rows");

  Panel panel;
  panel.individuals.reserve(id_order.size());
  for (const auto& id : id_order) {
    auto& rs = rows[id];
    std::sort(rs.begin(), rs.end(),
              [](const Row& a, const Row& b) { return a.time < b.time; });
    for (std::size_t t = 1; t < rs.size(); ++t)
      if (rs[t].time == rs[t - 1].time)
        throw InputError(origin + ": individual '" + id + "': duplicate time stamp " +
                         std::to_string(rs[t].time));
    IndividualSeries ind;
    ind.id = id;
    ind.times.reserve(rs.size());
    ind.y.reserve(rs.size());
    ind.x.assign(static_cast<std::size_t>(k), {});
    for (auto& s : ind.x) s.reserve(rs.size());
    for (const auto& r : rs) {
      ind.times.push_back(r.time);
      ind.y.push_back(r.y);
      for (int j = 0; j < k; ++j)
        ind.x[static_cast<std::size_t>(j)].push_back(r.x[static_cast<std::size_t>(j)]);
    }
    panel.individuals.push_back(std::move(ind));
  }
  panel.validate();
  return panel;
}

void write_panel_csv(const Panel& panel, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open output file: " + path);
  write_panel_csv(panel, out);
}

void write_panel_csv(const Panel& panel, std::ostream& out) {
  const int k = panel.k();
  out << "id,time,y";
  for (int j = 0; j < k; ++j) out << ",x" << (j + 1);
  out << "\n";
  std::ostringstream num;
  num.precision(17);
  for (const auto& ind : panel.individuals) {
    for (std::size_t t = 0; t < ind.y.size(); ++t) {
      num.str("");
      num << ind.y[t];
      out << ind.id << ',' << ind.times[t] << ',' << num.str();
      for (int j = 0; j < k; ++j) {
        num.str("");
        num << ind.x[static_cast<std::size_t>(j)][t];
        out << ',' << num.str();
      }
      out << "\n";
    }
  }
  if (!out) throw InputError("failed writing CSV output");
}

}  // namespace ivxj
