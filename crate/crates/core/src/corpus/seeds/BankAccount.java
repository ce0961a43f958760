public class BankAccount {
    private final String owner;
    private double balance;
    private int transactions;

    public BankAccount(String owner, double initial) {
        this.owner = owner;
        this.balance = initial;
        this.transactions = 0;
    }

    public void deposit(double amount) {
        if (amount <= 0) {
            throw new IllegalArgumentException("Deposit must be positive");
        }
        balance += amount;
        transactions++;
    }

    public boolean withdraw(double amount) {
        if (amount <= 0 || amount > balance) {
            return false;
        }
        balance -= amount;
        transactions++;
        return true;
    }

    public void applyInterest(double rate) {
        balance = balance * (1 + rate / 100.0);
    }

    public double getBalance() {
        return balance;
    }

    @Override
    public String toString() {
        return owner + ": " + String.format("%.2f", balance) + " after " + transactions + " transactions";
    }

    public static void main(String[] args) {
        BankAccount account = new BankAccount("Alice", 50.0);
        account.deposit(25.5);
        if (!account.withdraw(100)) {
            System.out.println("Insufficient funds");
        }
        account.withdraw(10);
        account.applyInterest(2.5);
        System.out.println(account);
    }
}
