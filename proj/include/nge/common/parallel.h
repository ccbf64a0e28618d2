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

#ifndef NGE_COMMON_PARALLEL_H_
#define NGE_COMMON_PARALLEL_H_

namespace nge {

// Worker count used by the OpenMP kernels. Defaults to the NGE_THREADS
// environment variable when set, otherwise the OpenMP default.
int worker_threads();

// Overrides the worker count; 1 gives the strict single-threaded mode.
void set_worker_threads(int n);

}  // namespace nge

#endif  // NGE_COMMON_PARALLEL_H_
