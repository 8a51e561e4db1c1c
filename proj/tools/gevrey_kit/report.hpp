#pragma once

#include <complex>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <gevrey/error.hpp>
#include <gevrey/numeric.hpp>

namespace gevrey_kit {

using json = nlohmann::ordered_json;

/// Exit codes: success or positive verdict, operational error, negative verdict.
enum Exit : int { kOk = 0, kError = 1, kNegative = 2 };

/// Raised by the command layer for bad flag combinations.
struct UsageError : gevrey::Error {
  explicit UsageError(const std::string& what) : gevrey::Error(gevrey::ErrorCode::domain, what) {}
};

inline json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

template <class Real>
json vector_json(const gevrey::CVector<Real>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(complex_json(gevrey::to_double(x)));
  return out;
}

/// Non-finite doubles become null so the report stays valid JSON.
inline json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

/// Round-trip formatting for CSV cells.
inline std::string cell(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string str() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + r[i];
      out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
  }
};

/// Write via a sibling temporary and rename, so readers never see a partial file.
inline void write_atomic(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw gevrey::Error(gevrey::ErrorCode::domain, "cannot open " + tmp.string() + " for writing");
    f << text;
    f.flush();
    if (!f) throw gevrey::Error(gevrey::ErrorCode::domain, "write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw gevrey::Error(gevrey::ErrorCode::domain, "cannot move report into " + path.string() + ": " + ec.message());
  }
}

/// path.csv -> path.<tag>.csv
inline std::filesystem::path sibling(const std::filesystem::path& path, const std::string& tag) {
  auto out = path;
  out.replace_extension();
  out += "." + tag + (path.has_extension() ? path.extension().string() : std::string(".csv"));
  return out;
}

}  // namespace gevrey_kit
