#pragma once

#include <string>
#include <vector>

namespace colim {

struct CheckItem {
  std::string name;
  double residual = 0.0;
  bool pass = true;
  std::string note;
};

struct CheckReport {
  bool ok = true;
  std::vector<CheckItem> items;

  void add(std::string name, double residual, bool pass, std::string note = "") {
    ok = ok && pass;
    items.push_back({std::move(name), residual, pass, std::move(note)});
  }

  double max_residual() const {
    double m = 0.0;
    for (const CheckItem& it : items) m = std::max(m, it.residual);
    return m;
  }
};

}  // namespace colim
