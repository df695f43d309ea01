#pragma once

#include <iostream>

#include "nhssh/runner.hpp"

namespace nhssh {

/// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
/// 4 I/O error.
inline int cli_main(int argc, const char* const* argv) {
  try {
    const RunConfig cfg = parse_config(argc, argv);
    run(cfg);
    return 0;
  } catch (const HelpRequested& help) {
    std::cout << help.text;
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace nhssh
