#pragma once

#include <map>
#include <string>

namespace navsim {

/// Layered key=value configuration with dotted section names, e.g.
/// "mpc.horizon=20". Later layers override earlier ones. Lines that are
/// blank or start with '#' are ignored.
class KvConfig {
 public:
  void set(const std::string& key, const std::string& value);
  void load_file(const std::string& path);
  void load_string(const std::string& text);

  bool has(const std::string& key) const;
  std::string get_str(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  unsigned long long get_u64(const std::string& key,
                             unsigned long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace navsim
