#empty file