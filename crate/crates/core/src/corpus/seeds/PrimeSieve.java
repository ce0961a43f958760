public class PrimeSieve {
    static boolean[] sieve(int limit) {
        boolean[] composite = new boolean[limit + 1];
        composite[0] = true;
        if (limit >= 1) {
            composite[1] = true;
        }
        for (int p = 2; (long) p * p <= limit; p++) {
            if (!composite[p]) {
                for (int m = p * p; m <= limit; m += p) {
                    composite[m] = true;
                }
            }
        }
        return composite;
    }

    static int countPrimes(boolean[] composite) {
        int count = 0;
        for (boolean c : composite) {
            if (!c) {
                count++;
            }
        }
        return count;
    }

    public static void main(String[] args) {
        int limit = args.length > 0 ? Integer.parseInt(args[0]) : 100;
        boolean[] composite = sieve(limit);
        int printed = 0;
        for (int i = 2; i <= limit; i++) {
            if (!composite[i]) {
                System.out.print(i);
                printed++;
                System.out.print(printed % 10 == 0 ? "\n" : " ");
            }
        }
        System.out.println();
        System.out.println("There are " + countPrimes(composite) + " primes up to " + limit);
    }
}
