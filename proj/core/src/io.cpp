#include "spadfit/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "spadfit/errors.hpp"

namespace spadfit {

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw IoError("format_double failed");
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw IoError("bad numeric value '" + std::string(text) + "'");
  }
  return value;
}

namespace {

constexpr char kBinaryMagic[8] = {'S', 'P', 'T', 'S', 'B', 'I', 'N', '1'};

std::string_view trim(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
    text.remove_prefix(1);
  }
  while (!text.empty() &&
         (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  return text;
}

std::uint64_t parse_u64(std::string_view text, std::string_view what) {
  std::uint64_t value = 0;
  int base = 10;
  if (text.starts_with("0x")) {
    text.remove_prefix(2);
    base = 16;
  }
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value, base);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw IoError("bad " + std::string(what) + " value '" + std::string(text) +
                  "'");
  }
  return value;
}

std::string hex_u64(std::uint64_t value) {
  char buf[19] = "0x";
  const auto [ptr, ec] = std::to_chars(buf + 2, buf + sizeof(buf), value, 16);
  if (ec != std::errc()) throw IoError("hex formatting failed");
  return std::string(buf, ptr);
}

void write_provenance(std::ostream& out, const Provenance& p) {
  out << "# config_hash = " << hex_u64(p.config_hash) << '\n'
      << "# seed = " << p.seed << '\n';
}

/// Line-oriented reader for the '#'-header + key=value + section formats.
class TextReader {
 public:
  TextReader(std::istream& in, std::string name)
      : in_(in), name_(std::move(name)) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++line_number_;
      line = std::string(trim(line));
      if (line.empty()) continue;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw IoError(name_ + ":" + std::to_string(line_number_) + ": " + what);
  }

  /// Splits "key = value"; returns false when the line is not of that shape.
  static bool key_value(std::string_view line, std::string_view& key,
                        std::string_view& value) {
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) return false;
    key = trim(line.substr(0, eq));
    value = trim(line.substr(eq + 1));
    return true;
  }

  /// Headers are "# key = value" comments before the body.
  static bool header_value(std::string_view line, std::string_view& key,
                           std::string_view& value) {
    if (!line.starts_with('#')) return false;
    line.remove_prefix(1);
    return key_value(trim(line), key, value);
  }

  int line_number() const { return line_number_; }

 private:
  std::istream& in_;
  std::string name_;
  int line_number_ = 0;
};

void read_header_provenance(std::string_view line, Provenance& p) {
  std::string_view key, value;
  if (!TextReader::header_value(line, key, value)) return;
  if (key == "config_hash") p.config_hash = parse_u64(value, "config_hash");
  if (key == "seed") p.seed = parse_u64(value, "seed");
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::ifstream open_input(const std::filesystem::path& path, bool binary) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

template <typename T>
void put_le(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  // This library only targets little-endian hosts; assert the layout once.
  static_assert(std::endian::native == std::endian::little);
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get_le(std::istream& in, std::string_view what) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw IoError("truncated binary field: " + std::string(what));
  }
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_timestamps(const std::filesystem::path& path,
                      const TimestampSet& timestamps, TimestampFormat format,
                      const Provenance& provenance) {
  std::ofstream out = open_output(path);
  if (format == TimestampFormat::binary) {
    out.write(kBinaryMagic, sizeof(kBinaryMagic));
    put_le<std::uint8_t>(out, timestamps.frame == Frame::absolute ? 0 : 1);
    put_le<double>(out, timestamps.cycle_length);
    put_le<std::uint64_t>(out, provenance.config_hash);
    put_le<std::uint64_t>(out, provenance.seed);
    put_le<std::uint64_t>(out, timestamps.size());
    for (double v : timestamps.values) put_le<double>(out, v);
  } else {
    out << "# timestamps v1\n";
    write_provenance(out, provenance);
    out << "# frame = "
        << (timestamps.frame == Frame::absolute ? "absolute" : "relative")
        << '\n'
        << "# cycle_length = " << format_double(timestamps.cycle_length)
        << '\n'
        << "# count = " << timestamps.size() << '\n';
    for (double v : timestamps.values) out << format_double(v) << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

TimestampSet read_timestamps(const std::filesystem::path& path,
                             Provenance* provenance) {
  {
    std::ifstream probe = open_input(path, true);
    char magic[sizeof(kBinaryMagic)] = {};
    probe.read(magic, sizeof(magic));
    if (probe && std::memcmp(magic, kBinaryMagic, sizeof(magic)) == 0) {
      TimestampSet set;
      set.frame =
          get_le<std::uint8_t>(probe, "frame") == 0 ? Frame::absolute
                                                    : Frame::relative;
      set.cycle_length = get_le<double>(probe, "cycle_length");
      Provenance p;
      p.config_hash = get_le<std::uint64_t>(probe, "config_hash");
      p.seed = get_le<std::uint64_t>(probe, "seed");
      const std::uint64_t count = get_le<std::uint64_t>(probe, "count");
      set.values.resize(count);
      for (std::uint64_t i = 0; i < count; ++i) {
        set.values[i] = get_le<double>(probe, "timestamp");
      }
      if (provenance) *provenance = p;
      return set;
    }
  }

  std::ifstream in = open_input(path, false);
  TextReader reader(in, path.string());
  TimestampSet set;
  Provenance p;
  std::uint64_t declared_count = 0;
  bool saw_count = false;
  std::string line;
  while (reader.next(line)) {
    if (line.starts_with('#')) {
      read_header_provenance(line, p);
      std::string_view key, value;
      if (TextReader::header_value(line, key, value)) {
        if (key == "frame") {
          if (value == "absolute") {
            set.frame = Frame::absolute;
          } else if (value == "relative") {
            set.frame = Frame::relative;
          } else {
            reader.fail("unknown frame '" + std::string(value) + "'");
          }
        } else if (key == "cycle_length") {
          set.cycle_length = parse_double(value);
        } else if (key == "count") {
          declared_count = parse_u64(value, "count");
          saw_count = true;
        }
      }
      continue;
    }
    try {
      set.values.push_back(parse_double(line));
    } catch (const IoError& e) {
      reader.fail(e.what());
    }
  }
  if (saw_count && declared_count != set.values.size()) {
    throw IoError(path.string() + ": count header disagrees with body");
  }
  if (provenance) *provenance = p;
  return set;
}

void write_histogram(const std::filesystem::path& path, const Histogram& hist,
                     const Provenance& provenance) {
  std::ofstream out = open_output(path);
  out << "# histogram v1\n";
  write_provenance(out, provenance);
  out << "# t_r = " << format_double(hist.cycle_length) << '\n'
      << "# bin_width = " << format_double(hist.bin_width) << '\n'
      << "# sample_count = " << hist.sample_count << '\n';
  for (double d : hist.densities) out << format_double(d) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

Histogram read_histogram(const std::filesystem::path& path,
                         Provenance* provenance) {
  std::ifstream in = open_input(path, false);
  TextReader reader(in, path.string());
  Histogram hist;
  Provenance p;
  std::string line;
  while (reader.next(line)) {
    if (line.starts_with('#')) {
      read_header_provenance(line, p);
      std::string_view key, value;
      if (TextReader::header_value(line, key, value)) {
        if (key == "t_r") hist.cycle_length = parse_double(value);
        if (key == "bin_width") hist.bin_width = parse_double(value);
        if (key == "sample_count") {
          hist.sample_count = parse_u64(value, "sample_count");
        }
      }
      continue;
    }
    try {
      hist.densities.push_back(parse_double(line));
    } catch (const IoError& e) {
      reader.fail(e.what());
    }
  }
  if (!(hist.cycle_length > 0.0) || !(hist.bin_width > 0.0)) {
    throw IoError(path.string() + ": missing t_r or bin_width header");
  }
  if (provenance) *provenance = p;
  return hist;
}

void write_params(std::ostream& out, const GummParams& params) {
  out << "t_r = " << format_double(params.cycle_length) << '\n'
      << "pi0 = " << format_double(params.uniform_weight) << '\n';
  for (const GaussianComponent& c : params.components) {
    out << "component = " << format_double(c.weight) << ' '
        << format_double(c.mean) << ' ' << format_double(c.stddev) << '\n';
  }
}

GummParams read_params(std::istream& in, std::string_view source_name) {
  TextReader reader(in, std::string(source_name));
  GummParams params;
  bool saw_cycle = false;
  std::string line;
  while (reader.next(line)) {
    if (line.starts_with('#')) continue;
    std::string_view key, value;
    if (!TextReader::key_value(line, key, value)) {
      reader.fail("expected 'key = value'");
    }
    if (key == "t_r") {
      params.cycle_length = parse_double(value);
      saw_cycle = true;
    } else if (key == "pi0") {
      params.uniform_weight = parse_double(value);
    } else if (key == "component") {
      std::istringstream fields{std::string(value)};
      std::string w, m, s;
      if (!(fields >> w >> m >> s)) {
        reader.fail("component needs 'weight mean stddev'");
      }
      params.components.push_back(
          GaussianComponent{parse_double(w), parse_double(m),
                            parse_double(s)});
    } else {
      reader.fail("unknown key '" + std::string(key) + "'");
    }
  }
  if (!saw_cycle) {
    throw IoError(std::string(source_name) + ": missing t_r");
  }
  return params;
}

void save_params(const std::filesystem::path& path, const GummParams& params,
                 const Provenance& provenance) {
  std::ofstream out = open_output(path);
  out << "# mixture params v1\n";
  write_provenance(out, provenance);
  write_params(out, params);
  if (!out) throw IoError("failed writing " + path.string());
}

GummParams load_params(const std::filesystem::path& path) {
  std::ifstream in = open_input(path, false);
  return read_params(in, path.string());
}

void write_fit_result(const std::filesystem::path& path, const FitResult& fit,
                      ModelKind model_kind, const Provenance& provenance) {
  std::ofstream out = open_output(path);
  out << "# fit result v1\n";
  write_provenance(out, provenance);
  out << "model = " << model_kind_name(model_kind) << '\n'
      << "gaussians = " << fit.params.num_gaussians() << '\n'
      << "padding_offset = " << format_double(fit.padding_offset) << '\n'
      << "iterations_run = " << fit.iterations_run << '\n'
      << "converged = " << (fit.converged ? 1 : 0) << '\n'
      << "clamp_events = " << fit.clamp_events << '\n'
      << "reinit_events = " << fit.reinit_events << '\n'
      << "[params]\n";
  write_params(out, fit.params);
  out << "[trace]\n";
  for (double ll : fit.loglik_trace) out << format_double(ll) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

StoredFitResult read_fit_result(const std::filesystem::path& path) {
  std::ifstream in = open_input(path, false);
  TextReader reader(in, path.string());
  StoredFitResult stored;
  std::string params_block;
  std::string line;
  enum class Section { head, params, trace } section = Section::head;
  while (reader.next(line)) {
    if (line.starts_with('#')) {
      read_header_provenance(line, stored.provenance);
      continue;
    }
    if (line == "[params]") {
      section = Section::params;
      continue;
    }
    if (line == "[trace]") {
      section = Section::trace;
      continue;
    }
    switch (section) {
      case Section::head: {
        std::string_view key, value;
        if (!TextReader::key_value(line, key, value)) {
          reader.fail("expected 'key = value'");
        }
        if (key == "model") {
          stored.model_kind = parse_model_kind(value);
        } else if (key == "padding_offset") {
          stored.fit.padding_offset = parse_double(value);
        } else if (key == "iterations_run") {
          stored.fit.iterations_run =
              static_cast<int>(parse_u64(value, "iterations_run"));
        } else if (key == "converged") {
          stored.fit.converged = value == "1";
        } else if (key == "clamp_events") {
          stored.fit.clamp_events =
              static_cast<int>(parse_u64(value, "clamp_events"));
        } else if (key == "reinit_events") {
          stored.fit.reinit_events =
              static_cast<int>(parse_u64(value, "reinit_events"));
        } else if (key == "gaussians") {
          // Redundant with the component list; accepted and ignored.
        } else {
          reader.fail("unknown key '" + std::string(key) + "'");
        }
        break;
      }
      case Section::params:
        params_block += line;
        params_block += '\n';
        break;
      case Section::trace:
        try {
          stored.fit.loglik_trace.push_back(parse_double(line));
        } catch (const IoError& e) {
          reader.fail(e.what());
        }
        break;
    }
  }
  std::istringstream params_in(params_block);
  stored.fit.params = read_params(params_in, path.string() + " [params]");
  return stored;
}

void write_scenario_report(const std::filesystem::path& path,
                           const ScenarioReport& report) {
  const Provenance provenance{config_hash(report.config),
                              report.config.rng_seed};
  std::ofstream out = open_output(path);
  out << "# scenario report v1\n";
  write_provenance(out, provenance);
  out << "scenario = " << report.scenario_name << '\n'
      << "model = " << model_kind_name(report.model_kind) << '\n'
      << "gaussians = " << report.num_gaussians << '\n'
      << "padded = " << (report.padded ? 1 : 0) << '\n'
      << "mse = " << format_double(report.mse) << '\n'
      << "padding_offset = " << format_double(report.fit.padding_offset)
      << '\n'
      << "iterations_run = " << report.fit.iterations_run << '\n'
      << "converged = " << (report.fit.converged ? 1 : 0) << '\n'
      << "clamp_events = " << report.fit.clamp_events << '\n'
      << "reinit_events = " << report.fit.reinit_events << '\n'
      << "[config]\n"
      << canonical_config_text(report.config) << "[params]\n";
  write_params(out, report.fit.params);
  out << "[trace]\n";
  for (double ll : report.fit.loglik_trace) out << format_double(ll) << '\n';
  out << "[histogram]\n"
      << "t_r = " << format_double(report.histogram.cycle_length) << '\n'
      << "bin_width = " << format_double(report.histogram.bin_width) << '\n'
      << "sample_count = " << report.histogram.sample_count << '\n';
  for (double d : report.histogram.densities) {
    out << format_double(d) << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

ScenarioReport read_scenario_report(const std::filesystem::path& path) {
  std::ifstream in = open_input(path, false);
  TextReader reader(in, path.string());
  ScenarioReport report;
  std::string params_block;
  std::string line;
  enum class Section { head, config, params, trace, histogram } section =
      Section::head;
  while (reader.next(line)) {
    if (line.starts_with('#')) continue;
    if (line == "[config]") { section = Section::config; continue; }
    if (line == "[params]") { section = Section::params; continue; }
    if (line == "[trace]") { section = Section::trace; continue; }
    if (line == "[histogram]") { section = Section::histogram; continue; }
    std::string_view key, value;
    switch (section) {
      case Section::head:
        if (!TextReader::key_value(line, key, value)) {
          reader.fail("expected 'key = value'");
        }
        if (key == "scenario") {
          report.scenario_name = std::string(value);
        } else if (key == "model") {
          report.model_kind = parse_model_kind(value);
        } else if (key == "gaussians") {
          report.num_gaussians = static_cast<int>(parse_u64(value, "gaussians"));
        } else if (key == "padded") {
          report.padded = value == "1";
        } else if (key == "mse") {
          report.mse = parse_double(value);
        } else if (key == "padding_offset") {
          report.fit.padding_offset = parse_double(value);
        } else if (key == "iterations_run") {
          report.fit.iterations_run =
              static_cast<int>(parse_u64(value, "iterations_run"));
        } else if (key == "converged") {
          report.fit.converged = value == "1";
        } else if (key == "clamp_events") {
          report.fit.clamp_events =
              static_cast<int>(parse_u64(value, "clamp_events"));
        } else if (key == "reinit_events") {
          report.fit.reinit_events =
              static_cast<int>(parse_u64(value, "reinit_events"));
        } else {
          reader.fail("unknown key '" + std::string(key) + "'");
        }
        break;
      case Section::config:
        if (!TextReader::key_value(line, key, value)) {
          reader.fail("expected 'key = value'");
        }
        apply_override(report.config, key, value);
        break;
      case Section::params:
        params_block += line;
        params_block += '\n';
        break;
      case Section::trace:
        report.fit.loglik_trace.push_back(parse_double(line));
        break;
      case Section::histogram:
        if (TextReader::key_value(line, key, value)) {
          if (key == "t_r") {
            report.histogram.cycle_length = parse_double(value);
          } else if (key == "bin_width") {
            report.histogram.bin_width = parse_double(value);
          } else if (key == "sample_count") {
            report.histogram.sample_count = parse_u64(value, "sample_count");
          } else {
            reader.fail("unknown histogram key '" + std::string(key) + "'");
          }
        } else {
          report.histogram.densities.push_back(parse_double(line));
        }
        break;
    }
  }
  std::istringstream params_in(params_block);
  report.fit.params = read_params(params_in, path.string() + " [params]");
  return report;
}

void write_plot_data(const std::filesystem::path& path, const Histogram& hist,
                     const GummParams& params, const PaddingPlan& plan,
                     const Provenance& provenance) {
  std::ofstream out = open_output(path);
  out << "# plot data v1: bin_center histogram_density model_density\n";
  write_provenance(out, provenance);
  for (std::size_t i = 0; i < hist.bin_count(); ++i) {
    const double center = hist.bin_center(i);
    out << format_double(center) << ' ' << format_double(hist.densities[i])
        << ' ' << format_double(unwrap_pdf(params, plan, center)) << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace spadfit
