import java.util.Scanner;

public class Factorial {
    static long iterative(int n) {
        long result = 1;
        for (int i = 2; i <= n; i++) {
            result = result * i;
        }
        return result;
    }

    static long recursive(int n) {
        if (n <= 1) {
            return 1;
        }
        return n * recursive(n - 1);
    }

    static long fibonacci(int n) {
        long a = 0, b = 1;
        for (int i = 0; i < n; i++) {
            long next = a + b;
            a = b;
            b = next;
        }
        return a;
    }

    public static void main(String[] args) {
        Scanner sc = new Scanner(System.in);
        System.out.print("Enter a number: ");
        int n = sc.nextInt();
        if (n < 0) {
            System.out.println("Negative input is not allowed");
            return;
        }
        System.out.println("Iterative: " + iterative(n));
        System.out.println("Recursive: " + recursive(n));
        System.out.println("Fibonacci: " + fibonacci(n));
    }
}
