#include "aenmf/log.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <atomic>
#include <memory>

namespace aenmf::log {
namespace {

std::atomic<bool> g_quiet{false};

spdlog::logger& logger() {
  static std::shared_ptr<spdlog::logger> l = [] {
    auto lg = spdlog::stderr_color_mt("aenmf");
    lg->set_pattern("[%H:%M:%S] [%^%l%$] %v");
    return lg;
  }();
  return *l;
}

}  // namespace

void set_quiet(bool q) { g_quiet = q; }
bool quiet() { return g_quiet; }

void info(std::string_view msg) {
  if (!g_quiet) logger().info("{}", msg);
}

void warn(std::string_view msg) {
  if (!g_quiet) logger().warn("{}", msg);
}

}  // namespace aenmf::log
