// Copyright 2026 The Neural Game Engine Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nge/common/parallel.h"

#include <omp.h>

#include <cstdlib>

#include <Eigen/Core>

namespace nge {
namespace {

int initial_threads() {
  if (const char* env = std::getenv("NGE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return omp_get_max_threads();
}

int& thread_setting() {
  static int threads = [] {
    const int n = initial_threads();
    omp_set_num_threads(n);
    Eigen::setNbThreads(n);
    return n;
  }();
  return threads;
}

}  // namespace

int worker_threads() { return thread_setting(); }

void set_worker_threads(int n) {
  if (n < 1) n = 1;
  thread_setting() = n;
  omp_set_num_threads(n);
  Eigen::setNbThreads(n);
}

}  // namespace nge
