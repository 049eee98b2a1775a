/* symbolic constants shared by the corpus scripts */
#ifndef MYDEFINITIONS_H
#define MYDEFINITIONS_H

#define MYWD        4
#define MYTASK      7
#define HEARTBEAT   150
#define CONTROLLER  2
#define SPARE       8
#define VOTERS      1

#endif
