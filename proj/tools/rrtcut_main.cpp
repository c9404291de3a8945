#include <iostream>
#include <string>
#include <vector>

#include "rrtcut/config.hpp"
#include "rrtcut/coupling.hpp"
#include "rrtcut/experiment.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty()) {
    std::cerr << rrtcut::usage();
    return 2;
  }
  try {
    rrtcut::run_experiment(rrtcut::parse_config(args));
  } catch (const rrtcut::UsageError& e) {
    std::cerr << "rrtcut: " << e.what() << '\n';
    return 2;
  } catch (const rrtcut::IoError& e) {
    std::cerr << "rrtcut: " << e.what() << '\n';
    return 3;
  } catch (const rrtcut::ResourceError& e) {
    std::cerr << "rrtcut: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "rrtcut: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
