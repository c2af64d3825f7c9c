#pragma once

#include "spsum/applications/graph.hpp"
#include "spsum/applications/hypergraph.hpp"
#include "spsum/applications/psd_counterexample.hpp"
#include "spsum/applications/sdp.hpp"
#include "spsum/bss.hpp"
#include "spsum/collection.hpp"
#include "spsum/control.hpp"
#include "spsum/error.hpp"
#include "spsum/io.hpp"
#include "spsum/mmwum_block.hpp"
#include "spsum/mmwum_wf.hpp"
#include "spsum/run.hpp"
#include "spsum/sampling.hpp"
#include "spsum/sparsify.hpp"
#include "spsum/sym_matrix.hpp"
