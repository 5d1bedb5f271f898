#pragma once

#include <string>
#include <string_view>

#include "amrex/errors.hpp"

namespace amrex::detail {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path without trailing '/', possibly empty
};

inline SplitUrl split_url(std::string_view url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) {
    throw ConfigError("service URL needs a scheme: '" + std::string(url) + "'");
  }
  if (url.substr(0, scheme_end) != "http") {
    throw ConfigError("only http:// service URLs are supported: '" + std::string(url) + "'");
  }
  auto path_start = url.find('/', scheme_end + 3);
  SplitUrl out;
  out.origin = std::string(url.substr(0, path_start));
  if (path_start != std::string_view::npos) {
    out.prefix = std::string(url.substr(path_start));
    while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  }
  return out;
}

}  // namespace amrex::detail
