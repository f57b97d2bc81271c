#include "l1ksvm/records.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "l1ksvm/error.hpp"

namespace l1ksvm {

namespace {

constexpr std::string_view kRecordsTag = "# l1ksvm-records v1 protocol=";
constexpr std::string_view kSummaryTag = "# l1ksvm-summary v1";
constexpr std::string_view kRecordsHeader =
    "scenario,method,size,repeat,seed,tp,tn,fp,fn,n_test,accuracy,n_features,flags";
constexpr std::string_view kSummaryHeader =
    "protocol,scenario,method,size,n_records,n_ok,n_failed,n_degenerate,acc_mean,acc_std,tp_pct,tn_pct,fp_pct,"
    "fn_pct,features_mean,features_std";

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q.push_back('"');
    q.push_back(c);
  }
  return q + "\"";
}

std::vector<std::string> split_csv(std::string_view line, std::size_t line_no) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  if (quoted) throw LoadError(line_no, "unterminated quoted field");
  out.push_back(std::move(cur));
  return out;
}

void append_num(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

template <typename T>
T parse_num(const std::string& s, std::size_t line_no, const char* what) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw LoadError(line_no, std::string("bad ") + what + " '" + s + "'");
  return v;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

template <typename F>
void for_each_line(std::string_view text, F f) {
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    const auto end = text.find('\n', pos);
    auto line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? text.size() : end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    f(line, line_no);
  }
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

SummaryRow reduce(std::vector<const RunRecord*> group, Protocol protocol, const std::string& scenario, Method method,
                  std::size_t size) {
  // Fixed reduction order makes the floating-point sums order independent.
  std::sort(group.begin(), group.end(), [](const RunRecord* a, const RunRecord* b) {
    return std::tie(a->scenario, a->repeat, a->seed) < std::tie(b->scenario, b->repeat, b->seed);
  });
  SummaryRow row;
  row.protocol = protocol;
  row.scenario = scenario;
  row.method = method;
  row.size = size;
  row.n_records = group.size();
  std::vector<double> acc, tp, tn, fp, fn, feats;
  for (const auto* r : group) {
    if (r->flags & kFlagDegenerate) {
      ++row.n_degenerate;
      continue;
    }
    if (r->flags & kFlagNoFeatures) feats.push_back(0.0);
    if (!r->usable()) {
      ++row.n_failed;
      continue;
    }
    ++row.n_ok;
    const double n = static_cast<double>(r->confusion.n_test);
    acc.push_back(100.0 * r->accuracy);
    tp.push_back(100.0 * static_cast<double>(r->confusion.tp) / n);
    tn.push_back(100.0 * static_cast<double>(r->confusion.tn) / n);
    fp.push_back(100.0 * static_cast<double>(r->confusion.fp) / n);
    fn.push_back(100.0 * static_cast<double>(r->confusion.fn) / n);
    feats.push_back(static_cast<double>(r->n_features));
  }
  row.acc_mean = mean_of(acc);
  row.acc_std = sample_std(acc);
  row.tp_pct = mean_of(tp);
  row.tn_pct = mean_of(tn);
  row.fp_pct = mean_of(fp);
  row.fn_pct = mean_of(fn);
  row.features_mean = mean_of(feats);
  row.features_std = sample_std(feats);
  return row;
}

}  // namespace

std::vector<SummaryRow> aggregate_records(std::span<const RunRecord> records, Protocol protocol,
                                          std::vector<std::string>* warnings) {
  using Key = std::tuple<std::string, int, std::size_t>;
  std::map<Key, std::vector<const RunRecord*>> groups;
  std::map<std::tuple<int, std::size_t>, std::vector<const RunRecord*>> pooled;
  for (const auto& r : records) {
    groups[{r.scenario, static_cast<int>(r.method), r.size}].push_back(&r);
    pooled[{static_cast<int>(r.method), r.size}].push_back(&r);
  }
  std::vector<SummaryRow> rows;
  auto emit = [&](SummaryRow row) {
    if (row.n_ok == 0) {
      if (warnings)
        warnings->push_back("no usable records for " + row.scenario + " / " + std::string(method_name(row.method)) +
                            " / size " + std::to_string(row.size) + "; row omitted");
      return;
    }
    rows.push_back(std::move(row));
  };
  for (const auto& [key, group] : groups)
    emit(reduce(group, protocol, std::get<0>(key), static_cast<Method>(std::get<1>(key)), std::get<2>(key)));
  for (const auto& [key, group] : pooled)
    emit(reduce(group, protocol, kPooledScenario, static_cast<Method>(std::get<0>(key)), std::get<1>(key)));
  return rows;
}

std::string format_records_csv(std::span<const RunRecord> records, Protocol protocol) {
  std::string out;
  out += kRecordsTag;
  out += protocol_name(protocol);
  out += '\n';
  out += kRecordsHeader;
  out += '\n';
  for (const auto& r : records) {
    out += csv_field(r.scenario);
    out += ',';
    out += method_name(r.method);
    out += ',' + std::to_string(r.size) + ',' + std::to_string(r.repeat) + ',' + std::to_string(r.seed);
    out += ',' + std::to_string(r.confusion.tp) + ',' + std::to_string(r.confusion.tn);
    out += ',' + std::to_string(r.confusion.fp) + ',' + std::to_string(r.confusion.fn);
    out += ',' + std::to_string(r.confusion.n_test) + ',';
    append_num(out, r.accuracy);
    out += ',' + std::to_string(r.n_features) + ',';
    out += flags_to_string(r.flags);
    out += '\n';
  }
  return out;
}

void write_records_csv(const std::filesystem::path& path, std::span<const RunRecord> records, Protocol protocol) {
  write_file(path, format_records_csv(records, protocol));
}

std::vector<RunRecord> parse_records_csv(std::string_view text, Protocol* protocol) {
  std::vector<RunRecord> out;
  bool seen_tag = false, seen_header = false;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    if (!seen_tag) {
      if (!line.starts_with(kRecordsTag)) throw LoadError(line_no, "missing records version line");
      const auto p = protocol_from_name(line.substr(kRecordsTag.size()));
      if (protocol) *protocol = p;
      seen_tag = true;
      return;
    }
    if (!seen_header) {
      if (line != kRecordsHeader) throw LoadError(line_no, "unexpected records header");
      seen_header = true;
      return;
    }
    const auto f = split_csv(line, line_no);
    if (f.size() != 13) throw LoadError(line_no, "expected 13 fields, found " + std::to_string(f.size()));
    RunRecord r;
    r.scenario = f[0];
    r.method = method_from_name(f[1]);
    r.size = parse_num<std::size_t>(f[2], line_no, "size");
    r.repeat = parse_num<int>(f[3], line_no, "repeat");
    r.seed = parse_num<std::uint64_t>(f[4], line_no, "seed");
    r.confusion.tp = parse_num<std::size_t>(f[5], line_no, "tp");
    r.confusion.tn = parse_num<std::size_t>(f[6], line_no, "tn");
    r.confusion.fp = parse_num<std::size_t>(f[7], line_no, "fp");
    r.confusion.fn = parse_num<std::size_t>(f[8], line_no, "fn");
    r.confusion.n_test = parse_num<std::size_t>(f[9], line_no, "n_test");
    r.accuracy = parse_num<double>(f[10], line_no, "accuracy");
    r.n_features = parse_num<std::size_t>(f[11], line_no, "n_features");
    r.flags = flags_from_string(f[12]);
    const auto& c = r.confusion;
    if (r.usable() && c.tp + c.tn + c.fp + c.fn != c.n_test)
      throw LoadError(line_no, "confusion counts do not sum to n_test");
    out.push_back(std::move(r));
  });
  if (!seen_header) throw Error("records file is missing its header");
  return out;
}

std::vector<RunRecord> read_records_csv(const std::filesystem::path& path, Protocol* protocol) {
  return parse_records_csv(read_file(path), protocol);
}

std::string format_summary_csv(std::span<const SummaryRow> rows) {
  std::string out;
  out += kSummaryTag;
  out += '\n';
  out += kSummaryHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += protocol_name(r.protocol);
    out += ',' + csv_field(r.scenario) + ',';
    out += method_name(r.method);
    out += ',' + std::to_string(r.size) + ',' + std::to_string(r.n_records) + ',' + std::to_string(r.n_ok) + ',' +
           std::to_string(r.n_failed) + ',' + std::to_string(r.n_degenerate);
    for (double v : {r.acc_mean, r.acc_std, r.tp_pct, r.tn_pct, r.fp_pct, r.fn_pct, r.features_mean, r.features_std}) {
      out += ',';
      append_num(out, v);
    }
    out += '\n';
  }
  return out;
}

void write_summary_csv(const std::filesystem::path& path, std::span<const SummaryRow> rows) {
  write_file(path, format_summary_csv(rows));
}

std::vector<SummaryRow> parse_summary_csv(std::string_view text) {
  std::vector<SummaryRow> out;
  bool seen_tag = false, seen_header = false;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    if (!seen_tag) {
      if (line != kSummaryTag) throw LoadError(line_no, "missing summary version line");
      seen_tag = true;
      return;
    }
    if (!seen_header) {
      if (line != kSummaryHeader) throw LoadError(line_no, "unexpected summary header");
      seen_header = true;
      return;
    }
    const auto f = split_csv(line, line_no);
    if (f.size() != 16) throw LoadError(line_no, "expected 16 fields, found " + std::to_string(f.size()));
    SummaryRow r;
    r.protocol = protocol_from_name(f[0]);
    r.scenario = f[1];
    r.method = method_from_name(f[2]);
    r.size = parse_num<std::size_t>(f[3], line_no, "size");
    r.n_records = parse_num<std::size_t>(f[4], line_no, "n_records");
    r.n_ok = parse_num<std::size_t>(f[5], line_no, "n_ok");
    r.n_failed = parse_num<std::size_t>(f[6], line_no, "n_failed");
    r.n_degenerate = parse_num<std::size_t>(f[7], line_no, "n_degenerate");
    double* dst[] = {&r.acc_mean, &r.acc_std, &r.tp_pct, &r.tn_pct, &r.fp_pct, &r.fn_pct, &r.features_mean,
                     &r.features_std};
    for (std::size_t k = 0; k < 8; ++k) *dst[k] = parse_num<double>(f[8 + k], line_no, "value");
    out.push_back(std::move(r));
  });
  if (!seen_header) throw Error("summary file is missing its header");
  return out;
}

std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path) {
  return parse_summary_csv(read_file(path));
}

}  // namespace l1ksvm
