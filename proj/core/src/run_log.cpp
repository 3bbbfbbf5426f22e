#include <array>
#include <ctime>

#include "lavanet/errors.hpp"
#include "lavanet/experiment.hpp"

namespace lavanet {

namespace {

constexpr std::array<const char*, 5> kLevelNames = {"trace", "debug", "info", "warn", "error"};

std::string utcTimestamp() {
  const auto now = std::chrono::system_clock::now();
  const auto seconds = std::chrono::system_clock::to_time_t(now);
  const auto millis =
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&seconds, &tm);
  char buf[40];
  const auto n = std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  std::snprintf(buf + n, sizeof buf - n, ".%03dZ", static_cast<int>(millis));
  return buf;
}

}  // namespace

LogLevel logLevelFromString(const std::string& name) {
  for (std::size_t i = 0; i < kLevelNames.size(); ++i) {
    if (name == kLevelNames[i]) return static_cast<LogLevel>(i);
  }
  throw Error("unknown log level '" + name + "'");
}

std::string toString(LogLevel level) { return kLevelNames[static_cast<std::size_t>(level)]; }

void RunLog::attach(const std::filesystem::path& file) {
  file_.open(file, std::ios::app);
  if (!file_) throw Error("cannot open log file " + file.string());
  for (const auto& e : entries_) {
    file_ << e.timestamp << " [" << toString(e.level) << "] " << e.phase << ": " << e.message << '\n';
  }
  file_.flush();
}

void RunLog::log(LogLevel level, const std::string& phase, const std::string& message) {
  if (level < threshold_) return;
  entries_.push_back({utcTimestamp(), level, phase, message});
  if (file_.is_open()) {
    const auto& e = entries_.back();
    file_ << e.timestamp << " [" << toString(e.level) << "] " << e.phase << ": " << e.message
          << std::endl;
  }
}

bool RunLog::contains(const std::string& phase, const std::string& messagePrefix) const {
  for (const auto& e : entries_) {
    if (e.phase == phase && e.message.rfind(messagePrefix, 0) == 0) return true;
  }
  return false;
}

}  // namespace lavanet
