int a;

// note
int b;
int c;
